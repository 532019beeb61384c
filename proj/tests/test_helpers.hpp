#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "wnlpb/config.hpp"
#include "wnlpb/geometry.hpp"
#include "wnlpb/jet_expr.hpp"
#include "wnlpb/rng.hpp"
#include "wnlpb/schwartz.hpp"

namespace wnlpb_test {

using namespace wnlpb;

// Fourth-order central difference of a callable; test-side oracle, independent
// of any library differentiation path.
inline double fd4(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

// Central second-order difference in one jet coordinate.
inline double fd_partial(const Expr& e, const JetPoint& p, int field, int order, double h) {
    JetPoint a = p, b = p;
    a.set(field, order, p.at(field, order) + h);
    b.set(field, order, p.at(field, order) - h);
    return (eval(e, a) - eval(e, b)) / (2 * h);
}

inline JetPoint random_jet_point(SplitMix64& rng, int n, int max_order, double lo = -2.0,
                                 double hi = 2.0) {
    JetPoint p(rng.uniform(lo, hi), n, max_order);
    for (int j = 1; j <= n; ++j)
        for (int i = 0; i <= max_order; ++i) p.set(j, i, rng.uniform(lo, hi));
    return p;
}

// Random expressions built from everywhere-admissible pieces (no poles, no
// branch points), for differentiation/simplification property tests.
inline Expr random_expr(SplitMix64& rng, int n, int max_order, int depth) {
    if (depth <= 0) {
        switch (rng.uniform_int(0, 3)) {
            case 0: return constant(rng.uniform(-2.0, 2.0));
            case 1: return var_x();
            default:
                return jet_var(rng.uniform_int(1, n), rng.uniform_int(0, max_order));
        }
    }
    switch (rng.uniform_int(0, 6)) {
        case 0: return add(random_expr(rng, n, max_order, depth - 1),
                           random_expr(rng, n, max_order, depth - 1));
        case 1: return sub(random_expr(rng, n, max_order, depth - 1),
                           random_expr(rng, n, max_order, depth - 1));
        case 2: return mul(random_expr(rng, n, max_order, depth - 1),
                           random_expr(rng, n, max_order, depth - 1));
        case 3: return pow_int(random_expr(rng, n, max_order, depth - 1),
                               rng.uniform_int(0, 3));
        case 4: return unary(UnaryOp::Sin, random_expr(rng, n, max_order, depth - 1));
        case 5: return unary(UnaryOp::Cos, random_expr(rng, n, max_order, depth - 1));
        default:
            // exp of a bounded combination keeps values tame
            return unary(UnaryOp::Exp,
                         mul(constant(rng.uniform(-0.3, 0.3)),
                             random_expr(rng, n, max_order, depth - 1)));
    }
}

// The constant-curvature example bracket on the chart {u > v}:
//   g^{11} = -alpha(u)(u-v)^2, g^{22} = beta(v)(u-v)^2,
//   alpha(u) = c1 + k + c2 u + c3 u^2, beta(v) = c1 + c2 v + c3 v^2,
//   w = sqrt(k) * Id, Gamma = Levi-Civita of g.
struct CurvatureExample {
    double k = 1.0, c1 = 1.0, c2 = 0.0, c3 = 0.0;
    BracketSpec spec;

    explicit CurvatureExample(double k_ = 1.0, double c1_ = 1.0, double c2_ = 0.0, double c3_ = 0.0)
        : k(k_), c1(c1_), c2(c2_), c3(c3_) {
        const int n = 2;
        auto num = [](double v) { return std::to_string(v); };
        const std::string alpha =
            "(" + num(c1 + k) + " + " + num(c2) + "*u + " + num(c3) + "*u^2)";
        const std::string beta = "(" + num(c1) + " + " + num(c2) + "*v + " + num(c3) + "*v^2)";
        spec.n = n;
        spec.g.assign(n * n, constant(0.0));
        spec.w.assign(n * n, constant(0.0));
        spec.g[0] = parse("-" + alpha + "*(u-v)^2", n);
        spec.g[3] = parse(beta + "*(u-v)^2", n);
        spec.w[0] = constant(std::sqrt(k));
        spec.w[3] = constant(std::sqrt(k));
        spec.gamma = levi_civita(spec.g, n);
        spec.gamma_derived = true;
        spec.name = "constant-curvature example";
    }

    double alpha(double u) const { return c1 + k + c2 * u + c3 * u * u; }
    double alpha_prime(double u) const { return c2 + 2 * c3 * u; }
    double beta(double v) const { return c1 + c2 * v + c3 * v * v; }
    double beta_prime(double v) const { return c2 + 2 * c3 * v; }

    // The eight closed-form Christoffel symbols of the example. Gamma^1_{22}
    // carries the sign metric compatibility forces (nabla_2 g^{12} = 0 gives
    // Gamma^1_{22} g^{22} + Gamma^2_{12} g^{11} = 0, i.e. -alpha/(beta (u-v))).
    double gamma_closed(int a, int b, int c, double u, double v) const {
        auto idx = [&](int x, int y, int z) { return a == x && b == y && c == z; };
        if (idx(1, 1, 1)) return 1.0 / (v - u) - alpha_prime(u) / (2 * alpha(u));
        if (idx(2, 2, 2)) return 1.0 / (u - v) - beta_prime(v) / (2 * beta(v));
        if (idx(1, 1, 2) || idx(1, 2, 1)) return 1.0 / (u - v);
        if (idx(2, 1, 2) || idx(2, 2, 1)) return 1.0 / (v - u);
        if (idx(2, 1, 1)) return beta(v) / (alpha(u) * (u - v));
        if (idx(1, 2, 2)) return -alpha(u) / (beta(v) * (u - v));
        return 0.0;
    }

    ChartSpec chart() const {
        ChartSpec c;
        c.n = 2;
        c.omega.n = 2;
        c.omega.constraints.push_back(HalfSpace{{1.0, -1.0}, 0.0, "u1 - u2 > 0"});
        c.subchart.lo = {0.3, -1.5};
        c.subchart.hi = {1.5, -0.3};
        c.delta_omega = 0.05;
        return c;
    }
};

inline BracketSpec flat_spec(int n) {
    BracketSpec s;
    s.n = n;
    s.g.assign(n * n, constant(0.0));
    s.w.assign(n * n, constant(0.0));
    s.gamma.assign(n * n * n, constant(0.0));
    for (int i = 0; i < n; ++i) s.g[i * n + i] = constant(1.0);
    s.gamma_derived = true;
    s.name = "flat";
    return s;
}

inline ChartSpec free_chart(int n) {
    ChartSpec c;
    c.n = n;
    c.omega.n = n;
    c.subchart.lo.assign(n, -1.0);
    c.subchart.hi.assign(n, 1.0);
    c.delta_omega = 0.05;
    return c;
}

inline CompiledConfig load_config(const std::string& name) {
    std::vector<Diagnostic> diags;
    RunConfig raw = parse_config_file(std::string(WNLPB_CONFIG_DIR) + "/" + name, diags);
    auto cc = compile_config(raw, diags);
    if (!cc) {
        std::string msg = "config " + name + " failed to compile:";
        for (const auto& d : diags) msg += "\n  " + d.to_string();
        throw std::runtime_error(msg);
    }
    return *cc;
}

}  // namespace wnlpb_test
