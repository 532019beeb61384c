#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "wnlpb/field_expr.hpp"

using namespace wnlpb;
using namespace wnlpb_test;

namespace {
const Grid kGrid(12.0, 2049);
}

TEST_CASE("dinv node derivative is its integrand") {
    FieldPtr f = field_closure(PolyGauss::gaussian(0.7, 1.1, 0.2));
    FieldPtr d = field_dinv(f);
    const auto& back = d->derivative()->samples(kGrid);
    const auto& orig = f->samples(kGrid);
    for (int k = 0; k < kGrid.m; ++k) CHECK(back[k] == orig[k]);
}

TEST_CASE("product rule on field expressions is exact") {
    PolyGauss a = PolyGauss::gaussian(1.0, 1.0, 0.0);
    PolyGauss b({GaussTerm{{0.0, 1.0}, 0.5, -0.4}});
    FieldPtr prod = field_prod({field_closure(a), field_closure(b)});
    const auto& dp = prod->derivative()->samples(kGrid);
    // analytic derivative of the product
    PolyGauss da = a.derivative(), db = b.derivative();
    for (int k = 0; k < kGrid.m; ++k) {
        const double x = kGrid.node(k);
        const double expect = da(x) * b(x) + a(x) * db(x);
        CHECK(dp[k] == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("jet expressions along a state evaluate and differentiate exactly") {
    TestFunction u(1, {PolyGauss::gaussian(0.8, 0.9, 0.3)});
    FieldVecPtr state = state_from(u);
    Expr e = parse("u1^2*sin(x) + u1_x", 1);
    FieldPtr f = field_jet_along(e, state);
    const auto& vals = f->samples(kGrid);
    const auto& dvals = f->derivative()->samples(kGrid);
    for (int k = 200; k < kGrid.m; k += 399) {
        const double x = kGrid.node(k);
        CHECK(vals[k] == doctest::Approx(eval(e, u.jet(x, 1))).epsilon(1e-13));
        const double fd =
            fd4([&](double s) { return eval(e, u.jet(s, 1)); }, x, 1e-3);
        CHECK(std::abs(dvals[k] - fd) <= 1e-7 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("raw samples without a derivative channel are refused") {
    FieldPtr p = field_precomputed(std::vector<double>(kGrid.m, 1.0));
    CHECK_NOTHROW(p->samples(kGrid));
    CHECK_THROWS_AS(p->derivative(), MissingDerivativeError);
}

TEST_CASE("perturbed states respect Omega checks") {
    Omega om;
    om.n = 1;
    om.constraints.push_back(HalfSpace{{-1.0}, -1.0, "u1 < 1"});
    TestFunction u(1, {PolyGauss::gaussian(0.95, 1.0, 0.0)});
    TestFunction k(1, {PolyGauss::gaussian(1.0, 1.0, 0.0)});
    FieldVecPtr su = state_from(u), sk = state_from(k);
    CHECK_NOTHROW(check_state_in_omega(*su, om, kGrid, "base"));
    FieldVecPtr bad = perturbed_state(su, 0.1, sk);  // peak 1.05 > 1
    CHECK_THROWS_AS(check_state_in_omega(*bad, om, kGrid, "perturbed"), OmegaEscapeError);
}

TEST_CASE("materialize rejects grids that do not match") {
    FieldPtr f = field_closure(PolyGauss::gaussian(1.0, 1.0, 0.0));
    (void)f->samples(kGrid);
    Grid other(10.0, 513);
    CHECK_THROWS_AS(f->samples(other), std::logic_error);
}
