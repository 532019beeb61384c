#include <doctest.h>

#include "test_helpers.hpp"
#include "wnlpb/jet_expr.hpp"

using namespace wnlpb;
using namespace wnlpb_test;

namespace {

bool eval_equal(const Expr& a, const Expr& b, int n, int max_order, double tol,
                std::uint64_t seed = 71) {
    SplitMix64 rng(seed);
    for (int t = 0; t < 60; ++t) {
        JetPoint p = random_jet_point(rng, n, max_order + 1);
        const double va = eval(a, p);
        const double vb = eval(b, p);
        const double scale = std::max({1.0, std::abs(va), std::abs(vb)});
        if (std::abs(va - vb) > tol * scale) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("parse recognizes the KdV density") {
    Expr e = parse("u1^3 - 0.5*u1*u1_xx", 1);
    auto vars = jet_vars(e);
    REQUIRE(vars.size() == 2);
    CHECK(vars[0] == JetVar{1, 0});
    CHECK(vars[1] == JetVar{1, 2});
    CHECK(max_jet_order(e) == 2);
}

TEST_CASE("parse of zero and aliases") {
    Expr z = parse("0", 1);
    CHECK(is_zero(z));
    // u,v aliases for n <= 3; suffixes apply to aliases too
    Expr e = parse("u*v_x + w", 3);
    auto vars = jet_vars(e);
    REQUIRE(vars.size() == 3);
    CHECK(vars[0] == JetVar{1, 0});
    CHECK(vars[1] == JetVar{2, 1});
    CHECK(vars[2] == JetVar{3, 0});
    CHECK(structurally_equal(parse("u1_d3", 1), jet_var(1, 3)));
}

TEST_CASE("parse rejects out-of-range fields and bad identifiers") {
    CHECK_THROWS_WITH_AS(parse("u2_x * exp(u1)", 1), doctest::Contains("field index out of range"),
                         ParseError);
    CHECK_THROWS_AS(parse("alpha + u1", 1), ParseError);
    CHECK_THROWS_AS(parse("u1 +", 1), ParseError);
    CHECK_THROWS_AS(parse("u1_xxx", 1), ParseError);
    CHECK_THROWS_AS(parse("v", 1), ParseError);  // alias v needs n >= 2
}

TEST_CASE("parse error carries the position") {
    try {
        parse("u1 + @", 1);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.pos == 5);
    }
}

TEST_CASE("eval matches direct arithmetic") {
    Expr e = parse("u1^3 - 0.5*u1*u1_xx", 1);
    JetPoint p(0.0, 1, 2);
    p.set(1, 0, 2.0);
    p.set(1, 2, 4.0);
    CHECK(eval(e, p) == doctest::Approx(4.0).epsilon(1e-15));

    JetPoint q(3.5, 1, 0);
    CHECK(eval(parse("x", 1), q) == 3.5);

    JetPoint r(0.0, 1, 1);
    r.set(1, 0, 0.0);
    r.set(1, 1, 7.0);
    CHECK(eval(parse("exp(u1)*u1_x", 1), r) == doctest::Approx(7.0).epsilon(1e-15));
}

TEST_CASE("eval reports the offending subexpression") {
    JetPoint p(0.0, 1, 0);
    p.set(1, 0, 0.0);
    try {
        eval(parse("1/u1", 1), p);
        FAIL("expected EvalError");
    } catch (const EvalError& e) {
        CHECK(e.subexpr == "1/u1");
    }
    CHECK_THROWS_AS(eval(parse("sqrt(u1 - 1)", 1), p), EvalError);
    CHECK_THROWS_AS(eval(parse("ln(u1)", 1), p), EvalError);
    // missing jet coordinate is an evaluation error, not a crash
    CHECK_THROWS_AS(eval(parse("u1_xx", 1), p), EvalError);
}

TEST_CASE("parsed trees round-trip through printing") {
    const char* sources[] = {
        "u1^3 - 0.5*u1*u1_xx",
        "exp(u1)*sin(x) - cos(u1_x)/(1 + u1^2)",
        "-(u1 - 2*u2)^3 + sqrt(1 + u2_xx^2)",
        "x*u1_d4 - 1e-3*u2_x",
    };
    for (const char* src : sources) {
        Expr e = parse(src, 2);
        Expr again = parse(to_string(e), 2);
        CHECK(structurally_equal(e, again));
    }
}

TEST_CASE("printing random trees preserves semantics") {
    SplitMix64 rng(2024);
    for (int t = 0; t < 40; ++t) {
        Expr e = random_expr(rng, 2, 2, 4);
        Expr back = parse(to_string(e), 2);
        CHECK(eval_equal(e, back, 2, 2, 1e-12, rng.next()));
    }
}

TEST_CASE("d_partial of the KdV density") {
    Expr e = parse("u1^3 - 0.5*u1*u1_xx", 1);
    CHECK(eval_equal(d_partial(e, 1, 0), parse("3*u1^2 - 0.5*u1_xx", 1), 1, 2, 1e-12));
    CHECK(eval_equal(d_partial(e, 1, 2), parse("-0.5*u1", 1), 1, 2, 1e-12));
    CHECK(is_zero(d_partial(e, 1, 1)));
}

TEST_CASE("d_partial agrees with central finite differences on random points") {
    SplitMix64 rng(555);
    Expr exprs[] = {
        parse("u1^3 - 0.5*u1*u1_xx", 1),
        parse("exp(u1)*u1_x + sin(u1_xx)", 1),
        random_expr(rng, 1, 2, 4),
        random_expr(rng, 1, 2, 4),
    };
    const double h = 1e-5;
    for (const Expr& e : exprs) {
        for (const JetVar& v : jet_vars(e)) {
            Expr de = d_partial(e, v.field, v.order);
            for (int t = 0; t < 100; ++t) {
                JetPoint p = random_jet_point(rng, 1, 3);
                const double sym = eval(de, p);
                const double fd = fd_partial(e, p, v.field, v.order, h);
                CHECK(std::abs(sym - fd) <= 1e-8 * std::max(1.0, std::abs(sym)));
            }
        }
    }
}

TEST_CASE("d_total basics") {
    CHECK(structurally_equal(d_total(parse("u1", 1)), jet_var(1, 1)));
    CHECK(eval_equal(d_total(parse("u1*u1_x", 1)), parse("u1_x^2 + u1*u1_xx", 1), 1, 2, 1e-12));
    CHECK(eval_equal(d_total(parse("x*u1", 1)), parse("u1 + x*u1_x", 1), 1, 1, 1e-12));
}

TEST_CASE("d_total is the chain rule along a concrete state") {
    // along u(x) = x exp(-x^2): x -> e(x, jet u(x)) differentiates to d_total(e)
    TestFunction u(1, {PolyGauss({GaussTerm{{0.0, 1.0}, 1.0, 0.0}})});
    Expr exprs[] = {
        parse("u1^3 - 0.5*u1*u1_xx", 1),
        parse("exp(u1)*sin(u1_x) + x*u1", 1),
    };
    for (const Expr& e : exprs) {
        Expr de = d_total(e);
        auto along = [&](double x) { return eval(e, u.jet(x, 4)); };
        for (double x : {-1.7, -0.3, 0.0, 0.9, 2.2}) {
            const double sym = eval(de, u.jet(x, 4));
            const double fd = fd4(along, x, 1e-3);
            CHECK(std::abs(sym - fd) <= 1e-6 * std::max(1.0, std::abs(sym)));
        }
    }
}

TEST_CASE("total and partial derivatives satisfy the commutation rule") {
    // d/du^{(i)} D_x = D_x d/du^{(i)} + d/du^{(i-1)}
    SplitMix64 rng(808);
    for (int t = 0; t < 25; ++t) {
        Expr e = random_expr(rng, 2, 2, 4);
        const int j = rng.uniform_int(1, 2);
        const int i = rng.uniform_int(1, 3);
        Expr lhs = d_partial(d_total(e), j, i);
        Expr rhs = add(d_total(d_partial(e, j, i)), d_partial(e, j, i - 1));
        CHECK(eval_equal(lhs, rhs, 2, 4, 1e-10, rng.next()));
    }
}

TEST_CASE("simplify normalizes the stated identities") {
    CHECK(structurally_equal(simplify(parse("0*u1_x + u1", 1)), jet_var(1, 0)));
    CHECK(structurally_equal(simplify(parse("u1^1", 1)), jet_var(1, 0)));
    CHECK(structurally_equal(simplify(parse("2*3", 1)), constant(6.0)));
    CHECK(structurally_equal(simplify(parse("u1*1 - 0", 1)), jet_var(1, 0)));
}

TEST_CASE("simplify is idempotent and semantics-preserving") {
    SplitMix64 rng(31337);
    for (int t = 0; t < 80; ++t) {
        Expr e = random_expr(rng, 2, 2, 5);
        Expr s1 = simplify(e);
        Expr s2 = simplify(s1);
        CHECK(structurally_equal(s1, s2));
        CHECK(eval_equal(e, s1, 2, 2, 1e-12, rng.next()));
    }
}
