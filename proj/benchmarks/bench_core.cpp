#include <benchmark/benchmark.h>

#include "wnlpb/bracket.hpp"
#include "wnlpb/geometry.hpp"
#include "wnlpb/jet_expr.hpp"
#include "wnlpb/schwartz.hpp"
#include "wnlpb/variational.hpp"

using namespace wnlpb;

namespace {

const char* kKdV = "u1^3 - 0.5*u1*u1_xx";

BracketSpec curvature_spec() {
    BracketSpec s;
    s.n = 2;
    s.g.assign(4, constant(0.0));
    s.w.assign(4, constant(0.0));
    s.g[0] = parse("-2*(u-v)^2", 2);
    s.g[3] = parse("(u-v)^2", 2);
    s.w[0] = constant(1.0);
    s.w[3] = constant(1.0);
    s.gamma = levi_civita(s.g, 2);
    s.gamma_derived = true;
    return s;
}

ChartSpec curvature_chart() {
    ChartSpec c;
    c.n = 2;
    c.omega.n = 2;
    c.omega.constraints.push_back(HalfSpace{{1.0, -1.0}, 0.0, "u1 - u2 > 0"});
    c.subchart.lo = {0.3, -1.5};
    c.subchart.hi = {1.5, -0.3};
    return c;
}

void BM_parse(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(parse(kKdV, 1));
}
BENCHMARK(BM_parse);

void BM_eval(benchmark::State& state) {
    Expr e = parse(kKdV, 1);
    JetPoint p(0.3, 1, 2);
    p.set(1, 0, 0.7);
    p.set(1, 2, -0.2);
    for (auto _ : state) benchmark::DoNotOptimize(eval(e, p));
}
BENCHMARK(BM_eval);

void BM_d_total(benchmark::State& state) {
    Expr e = parse(kKdV, 1);
    for (auto _ : state) benchmark::DoNotOptimize(d_total(e));
}
BENCHMARK(BM_d_total);

void BM_dinv(benchmark::State& state) {
    Grid grid(12.0, static_cast<int>(state.range(0)));
    PolyGauss f = PolyGauss::gaussian(1.0, 1.0, 0.0);
    std::vector<double> fs(grid.m);
    for (int k = 0; k < grid.m; ++k) fs[k] = f(grid.node(k));
    for (auto _ : state) benchmark::DoNotOptimize(dinv(fs, grid));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_dinv)->RangeMultiplier(4)->Range(257, 16385)->Complexity(benchmark::oN);

void BM_vd_kdv(benchmark::State& state) {
    Grid grid(12.0, 4097);
    Functional kdv("kdv", WNLChain(LocalDensity(parse(kKdV, 1), 1), {}));
    TestFunction u(1, {PolyGauss::gaussian(1.0, 1.0, 0.0)});
    for (auto _ : state) {
        auto vd = variational_derivative(kdv, state_from(u));
        benchmark::DoNotOptimize(vd[0]->samples(grid));
    }
}
BENCHMARK(BM_vd_kdv);

void BM_vd_depth2_chain(benchmark::State& state) {
    Grid grid(12.0, 4097);
    Functional f("wnl",
                 WNLChain(LocalDensity(parse("u1", 1), 1),
                          {{LocalDensity(parse("u1", 1), 1), LocalDensity(parse("u1^2", 1), 1)}}));
    TestFunction u(1, {PolyGauss::gaussian(1.0, 1.0, 0.0)});
    for (auto _ : state) {
        auto vd = variational_derivative(f, state_from(u));
        benchmark::DoNotOptimize(vd[0]->samples(grid));
    }
}
BENCHMARK(BM_vd_depth2_chain);

void BM_gpc_check(benchmark::State& state) {
    BracketSpec spec = curvature_spec();
    GeometryContext ctx(spec);
    ChartSpec chart = curvature_chart();
    auto samples = sample_points(chart.subchart, chart.omega, 0.05, 50);
    GeometryTolerances tol;
    for (auto _ : state) benchmark::DoNotOptimize(gpc_check(ctx, samples, tol, 1));
}
BENCHMARK(BM_gpc_check);

void BM_jacobi_trial(benchmark::State& state) {
    BracketSpec spec = curvature_spec();
    GeometryContext ctx(spec);
    ChartSpec chart = curvature_chart();
    Grid grid(12.0, 4097);
    TrialOptions opt;
    opt.trials = 1;
    opt.seed = 99;
    for (auto _ : state) benchmark::DoNotOptimize(jacobi_residual(ctx, chart, grid, opt));
}
BENCHMARK(BM_jacobi_trial);

}  // namespace

BENCHMARK_MAIN();
