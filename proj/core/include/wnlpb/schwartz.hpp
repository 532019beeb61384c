#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wnlpb/jet_expr.hpp"

namespace wnlpb {

// ---------------------------------------------------------------------------
// Analytic closures: finite sums of p(x-c) * exp(-a (x-c)^2), a > 0.
// Closed under differentiation, so jets of any order are exact.
// ---------------------------------------------------------------------------

struct GaussTerm {
    std::vector<double> poly;  // coefficients of p(y), y = x - c
    double a = 1.0;
    double c = 0.0;
};

class PolyGauss {
public:
    PolyGauss() = default;
    explicit PolyGauss(std::vector<GaussTerm> terms);

    static PolyGauss gaussian(double amplitude, double a, double center);
    static PolyGauss zero() { return PolyGauss(); }

    double operator()(double x) const;
    PolyGauss derivative() const;

    PolyGauss& operator+=(const PolyGauss& other);
    PolyGauss scaled(double s) const;

    bool is_zero() const { return terms_.empty(); }
    const std::vector<GaussTerm>& terms() const { return terms_; }

private:
    std::vector<GaussTerm> terms_;
};

// ---------------------------------------------------------------------------
// Uniform grid on [-L, L] with composite-trapezoid weights.
// ---------------------------------------------------------------------------

struct Grid {
    double L = 12.0;
    int m = 4097;

    Grid() = default;
    Grid(double half_width, int points) : L(half_width), m(points) {
        if (m < 2 || L <= 0) throw std::invalid_argument("Grid: need m >= 2 and L > 0");
    }
    double h() const { return 2.0 * L / (m - 1); }
    double node(int k) const { return -L + 2.0 * L * k / (m - 1); }
    bool same(const Grid& o) const { return L == o.L && m == o.m; }
};

// Trapezoid quadrature over the grid (compensated summation).
double integrate(std::span<const double> f, const Grid& grid);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  // Richardson comparison against the half-resolution grid
};
QuadratureResult integrate_with_error(std::span<const double> f, const Grid& grid);

// Symmetric antiderivative d^{-1}(f)(x) = (1/2)(int_{-inf}^x f - int_x^{+inf} f),
// discretized by cumulative trapezoid prefix sums with the half-total subtracted.
// Endpoint Euler-Maclaurin correction keeps the interior error near the tail floor.
std::vector<double> dinv(std::span<const double> f, const Grid& grid);

// Finite differences of sampled data, fourth order in the interior. Used for
// the dinv endpoint correction and by verification checks; never to build jets.
std::vector<double> fd_derivative(std::span<const double> f, double h);

struct SampledFunction {
    int n = 0;
    std::vector<std::vector<double>> values;  // [component][node]
    std::vector<std::vector<double>> deriv;   // optional exact-derivative channel
    std::string provenance;

    bool has_derivative() const { return !deriv.empty(); }
};

// ---------------------------------------------------------------------------
// Chart domain Omega: open set cut out by strict affine inequalities
// sum_j coeff[j] * z_j > offset. An empty constraint list means R^n.
// ---------------------------------------------------------------------------

struct HalfSpace {
    std::vector<double> coeff;
    double offset = 0.0;
    std::string label;  // for diagnostics, e.g. "u1 - u2 > 0"
};

struct Omega {
    int n = 1;
    std::vector<HalfSpace> constraints;

    bool contains(std::span<const double> z) const;
    // Smallest constraint slack a.z - b; +inf when unconstrained.
    double slack(std::span<const double> z) const;
    // Schwartz functions decay to the origin, so the origin must not be
    // strictly excluded: every constraint needs offset <= 0.
    bool origin_admissible() const;
};

struct Box {
    std::vector<double> lo, hi;  // one interval per field
};

// ---------------------------------------------------------------------------
// TestFunction: stand-in for an element of S(Omega) with exact jets.
// ---------------------------------------------------------------------------

struct OmegaEscapeError : std::runtime_error {
    OmegaEscapeError(const std::string& msg, int component_, double x_, double value_)
        : std::runtime_error(msg), component(component_), x(x_), value(value_) {}
    int component;
    double x;
    double value;
};

class TestFunction {
public:
    TestFunction(int n, std::vector<PolyGauss> components);

    int n() const { return n_; }
    const PolyGauss& component(int j) const;                    // 0-based
    const PolyGauss& component_derivative(int j, int order) const;  // cached closures
    JetPoint jet(double x, int max_order) const;

    // Decay certificate: smallest half-width beyond which all components and
    // their derivatives up to max_order stay below eps_tail (empirical scan
    // under the Gaussian envelope).
    double l_cut(int max_order, double eps_tail) const;

private:
    int n_ = 1;
    std::vector<PolyGauss> comp_;
    mutable std::vector<std::vector<PolyGauss>> derivs_;
};

struct TestFunctionTerm {
    int field = 1;  // 1-based
    double a = 1.0;
    double c = 0.0;
    std::vector<double> poly;  // p(x-c)
};

// Builds the closures, verifies the decay certificate against the grid and the
// image containment in Omega. The containment margin scales with the local
// envelope: delta_omega at the peak, relaxing to zero in the far tails (charts
// like {u1 - u2 > 0} touch the boundary at the origin, which Schwartz tails
// approach by construction).
TestFunction make_test_function(int n, const std::vector<TestFunctionTerm>& terms,
                                const Omega& omega, double delta_omega, const Grid& grid,
                                int working_order = 6, double eps_tail = 1e-14);

}  // namespace wnlpb
