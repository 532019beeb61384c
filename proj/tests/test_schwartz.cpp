#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "wnlpb/schwartz.hpp"

using namespace wnlpb;
using namespace wnlpb_test;

namespace {

const Grid kGrid(12.0, 4097);

std::vector<double> sample(const PolyGauss& f, const Grid& g) {
    std::vector<double> v(g.m);
    for (int k = 0; k < g.m; ++k) v[k] = f(g.node(k));
    return v;
}

const PolyGauss kGaussian = PolyGauss::gaussian(1.0, 1.0, 0.0);

}  // namespace

TEST_CASE("PolyGauss derivative matches finite differences") {
    PolyGauss f({GaussTerm{{0.3, -1.2, 0.0, 0.5}, 0.8, 0.4}});
    PolyGauss df = f.derivative();
    for (double x : {-2.1, -0.4, 0.0, 0.7, 1.9, 3.3}) {
        const double fd = fd4([&](double t) { return f(t); }, x, 1e-3);
        CHECK(df(x) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("trapezoid integration of Schwartz data") {
    CHECK(std::abs(integrate(sample(kGaussian, kGrid), kGrid) - std::sqrt(M_PI)) <= 1e-10);
    CHECK(integrate(std::vector<double>(kGrid.m, 0.0), kGrid) == 0.0);
    PolyGauss odd({GaussTerm{{0.0, 1.0}, 1.0, 0.0}});  // x exp(-x^2)
    CHECK(std::abs(integrate(sample(odd, kGrid), kGrid)) <= 1e-12);
}

TEST_CASE("quadrature error drops at least 4x per refinement until the tail floor") {
    const double exact = std::sqrt(M_PI);
    double prev = -1.0;
    bool hit_floor = false;
    for (int m : {33, 65, 129, 257, 513}) {
        Grid g(12.0, m);
        const double err = std::abs(integrate(sample(kGaussian, g), g) - exact);
        if (prev >= 0 && !hit_floor) {
            if (prev <= 1e-12) {
                hit_floor = true;
            } else {
                CHECK(err <= prev / 4.0);
            }
        }
        prev = err;
    }
    CHECK(prev <= 1e-12);  // converged to the floor on the finest grid
}

TEST_CASE("integrate_with_error brackets the true error") {
    Grid g(12.0, 129);
    auto r = integrate_with_error(sample(kGaussian, g), g);
    const double actual = std::abs(r.value - std::sqrt(M_PI));
    CHECK(actual <= std::max(10.0 * r.error_estimate, 1e-12));
}

TEST_CASE("dinv of zero is zero and of even data vanishes at the origin") {
    auto z = dinv(std::vector<double>(kGrid.m, 0.0), kGrid);
    for (double v : z) CHECK(v == 0.0);

    auto d = dinv(sample(kGaussian, kGrid), kGrid);
    CHECK(std::abs(d[(kGrid.m - 1) / 2]) <= 1e-12);
}

TEST_CASE("dinv of a Gaussian matches the error-function oracle") {
    auto d = dinv(sample(kGaussian, kGrid), kGrid);
    double worst = 0.0;
    for (int k = 0; k < kGrid.m; ++k) {
        const double oracle = 0.5 * std::sqrt(M_PI) * std::erf(kGrid.node(k));
        worst = std::max(worst, std::abs(d[k] - oracle));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("dinv is an antiderivative and has the stated edge limits") {
    PolyGauss f({GaussTerm{{0.4, -0.7, 1.1}, 0.9, -0.3}});
    auto fs = sample(f, kGrid);
    auto d = dinv(fs, kGrid);
    const double total = integrate(fs, kGrid);
    CHECK(std::abs(d[0] + 0.5 * total) <= 1e-8);
    CHECK(std::abs(d[kGrid.m - 1] - 0.5 * total) <= 1e-8);

    // test-side 4th-order differences of the dinv samples reproduce f
    const double h = kGrid.h();
    double worst = 0.0;
    for (int k = 2; k + 2 < kGrid.m; ++k) {
        const double fd = (-d[k + 2] + 8 * d[k + 1] - 8 * d[k - 1] + d[k - 2]) / (12 * h);
        worst = std::max(worst, std::abs(fd - fs[k]));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("the left edge of dinv tends to -(1/2) the full-line integral as L grows") {
    // wide Gaussian: exp(-x^2/20) has real mass beyond small truncation windows
    const double a = 0.05;
    const double full_mass = std::sqrt(M_PI / a);
    double prev = -1.0;
    for (auto [L, m] : {std::pair{6.0, 1025}, {12.0, 2049}, {24.0, 4097}}) {
        Grid g(L, m);
        std::vector<double> fs(g.m);
        for (int k = 0; k < g.m; ++k) fs[k] = std::exp(-a * g.node(k) * g.node(k));
        const double residual = std::abs(dinv(fs, g)[0] + 0.5 * full_mass);
        if (prev >= 0) CHECK(residual <= prev / 100.0);
        prev = residual;
    }
    CHECK(prev <= 1e-8);
}

TEST_CASE("product identity: xi = dinv(f) dinv(g)") {
    PolyGauss f({GaussTerm{{1.0}, 1.0, 0.5}});
    PolyGauss g({GaussTerm{{0.0, 0.8}, 0.7, -0.4}});
    auto fs = sample(f, kGrid);
    auto gs = sample(g, kGrid);
    auto df = dinv(fs, kGrid);
    auto dg = dinv(gs, kGrid);

    // boundary difference vanishes
    const double xi_right = df[kGrid.m - 1] * dg[kGrid.m - 1];
    const double xi_left = df[0] * dg[0];
    CHECK(std::abs(xi_right - xi_left) <= 1e-8);

    // xi' = dinv(f) g + f dinv(g), checked with test-side differences
    std::vector<double> xi(kGrid.m);
    for (int k = 0; k < kGrid.m; ++k) xi[k] = df[k] * dg[k];
    const double h = kGrid.h();
    double worst = 0.0;
    for (int k = 2; k + 2 < kGrid.m; ++k) {
        const double fd = (-xi[k + 2] + 8 * xi[k + 1] - 8 * xi[k - 1] + xi[k - 2]) / (12 * h);
        worst = std::max(worst, std::abs(fd - (df[k] * gs[k] + fs[k] * dg[k])));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("f * dinv(g) decays like f near the edges") {
    PolyGauss f({GaussTerm{{1.0}, 1.0, 0.0}});
    PolyGauss g({GaussTerm{{0.6}, 0.8, 0.7}});
    auto fs = sample(f, kGrid);
    auto gs = sample(g, kGrid);
    auto dg = dinv(gs, kGrid);
    const double half_mass = 0.5 * std::abs(integrate(gs, kGrid));
    for (int k = 0; k < kGrid.m; ++k) {
        const double x = kGrid.node(k);
        if (std::abs(x) < 0.8 * kGrid.L) continue;
        CHECK(std::abs(fs[k] * dg[k]) <= half_mass * std::abs(fs[k]) * (1.0 + 1e-6) + 1e-300);
    }
}

TEST_CASE("TestFunction jets are exact") {
    TestFunction gauss(1, {kGaussian});
    JetPoint p = gauss.jet(0.0, 2);
    CHECK(p.at(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.at(1, 1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(p.at(1, 2) == doctest::Approx(-2.0).epsilon(1e-15));

    TestFunction xg(1, {PolyGauss({GaussTerm{{0.0, 1.0}, 1.0, 0.0}})});
    JetPoint q = xg.jet(0.0, 2);
    CHECK(q.at(1, 0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(q.at(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(q.at(1, 2) == doctest::Approx(0.0).epsilon(1e-15));

    // derivative closures agree with finite differences of the value closure
    SplitMix64 rng(99);
    for (int t = 0; t < 10; ++t) {
        const double x = rng.uniform(-3.0, 3.0);
        for (int order = 1; order <= 3; ++order) {
            const auto& lower = gauss.component_derivative(0, order - 1);
            const double fd = fd4([&](double s) { return lower(s); }, x, 1e-3);
            const double exact = gauss.component_derivative(0, order)(x);
            CHECK(std::abs(exact - fd) <= 1e-8 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("decay certificate bounds the tails") {
    TestFunction gauss(1, {kGaussian});
    const double lc = gauss.l_cut(6, 1e-14);
    CHECK(lc <= 12.0);
    for (double x = lc; x <= lc + 5.0; x += 0.37) {
        for (int i = 0; i <= 6; ++i) {
            CHECK(std::abs(gauss.component_derivative(0, i)(x)) < 1e-14);
            CHECK(std::abs(gauss.component_derivative(0, i)(-x)) < 1e-14);
        }
    }
}

TEST_CASE("make_test_function enforces image containment in Omega") {
    Omega box;
    box.n = 1;
    box.constraints.push_back(HalfSpace{{1.0}, -1.0, "u1 > -1"});
    box.constraints.push_back(HalfSpace{{-1.0}, -1.0, "u1 < 1"});

    CHECK_NOTHROW(make_test_function(1, {TestFunctionTerm{1, 1.0, 0.0, {0.5}}}, box, 0.05, kGrid));
    try {
        make_test_function(1, {TestFunctionTerm{1, 1.0, 0.0, {2.0}}}, box, 0.05, kGrid);
        FAIL("expected OmegaEscapeError");
    } catch (const OmegaEscapeError& e) {
        // the diagnostic names the component, the node and the value there
        CHECK(e.component == 1);
        CHECK(std::abs(e.x) <= kGrid.L);
        CHECK(e.value == doctest::Approx(2.0 * std::exp(-e.x * e.x)).epsilon(1e-9));
        CHECK(e.value >= 0.9);  // inside the margin band around the u1 < 1 wall
    }

    // the constant-curvature example chart {u > v} accepts a mirrored pair of Gaussians
    Omega halfplane;
    halfplane.n = 2;
    halfplane.constraints.push_back(HalfSpace{{1.0, -1.0}, 0.0, "u1 - u2 > 0"});
    CHECK_NOTHROW(make_test_function(2,
                                     {TestFunctionTerm{1, 1.0, 0.0, {0.3}},
                                      TestFunctionTerm{2, 1.0, 0.0, {-0.3}}},
                                     halfplane, 0.05, kGrid));
}

TEST_CASE("Omega slack and origin admissibility") {
    Omega om;
    om.n = 2;
    om.constraints.push_back(HalfSpace{{1.0, -1.0}, 0.0, "u1 - u2 > 0"});
    std::vector<double> inside{0.5, -0.5}, outside{-0.5, 0.5};
    CHECK(om.contains(inside));
    CHECK(!om.contains(outside));
    CHECK(om.slack(inside) == doctest::Approx(1.0));
    CHECK(om.origin_admissible());
    om.constraints.push_back(HalfSpace{{1.0, 0.0}, 0.5, "u1 > 0.5"});
    CHECK(!om.origin_admissible());
}
