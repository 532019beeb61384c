#include "wnlpb/schwartz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wnlpb {

namespace {

double eval_poly(const std::vector<double>& p, double y) {
    double acc = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * y + p[i];
    return acc;
}

bool poly_is_zero(const std::vector<double>& p) {
    for (double c : p)
        if (c != 0.0) return false;
    return true;
}

struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

PolyGauss::PolyGauss(std::vector<GaussTerm> terms) {
    for (auto& t : terms) {
        if (t.a <= 0) throw std::invalid_argument("PolyGauss: Gaussian rate a must be > 0");
        if (!poly_is_zero(t.poly)) terms_.push_back(std::move(t));
    }
}

PolyGauss PolyGauss::gaussian(double amplitude, double a, double center) {
    return PolyGauss({GaussTerm{{amplitude}, a, center}});
}

double PolyGauss::operator()(double x) const {
    double acc = 0.0;
    for (const GaussTerm& t : terms_) {
        const double y = x - t.c;
        acc += eval_poly(t.poly, y) * std::exp(-t.a * y * y);
    }
    return acc;
}

PolyGauss PolyGauss::derivative() const {
    std::vector<GaussTerm> out;
    out.reserve(terms_.size());
    for (const GaussTerm& t : terms_) {
        // d/dx [p(y) e^{-a y^2}] = (p'(y) - 2 a y p(y)) e^{-a y^2}
        std::vector<double> q(t.poly.size() + 1, 0.0);
        for (std::size_t i = 1; i < t.poly.size(); ++i) q[i - 1] += i * t.poly[i];
        for (std::size_t i = 0; i < t.poly.size(); ++i) q[i + 1] -= 2.0 * t.a * t.poly[i];
        out.push_back(GaussTerm{std::move(q), t.a, t.c});
    }
    return PolyGauss(std::move(out));
}

PolyGauss& PolyGauss::operator+=(const PolyGauss& other) {
    for (const GaussTerm& t : other.terms_) terms_.push_back(t);
    return *this;
}

PolyGauss PolyGauss::scaled(double s) const {
    if (s == 0.0) return PolyGauss();
    std::vector<GaussTerm> out = terms_;
    for (GaussTerm& t : out)
        for (double& c : t.poly) c *= s;
    return PolyGauss(std::move(out));
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

double integrate(std::span<const double> f, const Grid& grid) {
    if (static_cast<int>(f.size()) != grid.m)
        throw std::invalid_argument("integrate: sample count does not match grid");
    KahanSum s;
    s.add(0.5 * f[0]);
    for (int k = 1; k + 1 < grid.m; ++k) s.add(f[k]);
    s.add(0.5 * f[grid.m - 1]);
    return s.sum * grid.h();
}

QuadratureResult integrate_with_error(std::span<const double> f, const Grid& grid) {
    QuadratureResult r;
    r.value = integrate(f, grid);
    if (grid.m >= 5 && grid.m % 2 == 1) {
        const int mh = (grid.m + 1) / 2;
        std::vector<double> half(mh);
        for (int k = 0; k < mh; ++k) half[k] = f[2 * k];
        const double coarse = integrate(half, Grid(grid.L, mh));
        r.error_estimate = std::abs(r.value - coarse) / 3.0;
    } else {
        r.error_estimate = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

std::vector<double> fd_derivative(std::span<const double> f, double h) {
    const int m = static_cast<int>(f.size());
    std::vector<double> d(m, 0.0);
    if (m < 3) return d;
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[1] = (f[2] - f[0]) / (2.0 * h);
    for (int k = 2; k + 2 < m; ++k)
        d[k] = (-f[k + 2] + 8.0 * f[k + 1] - 8.0 * f[k - 1] + f[k - 2]) / (12.0 * h);
    d[m - 2] = (f[m - 1] - f[m - 3]) / (2.0 * h);
    d[m - 1] = (3.0 * f[m - 1] - 4.0 * f[m - 2] + f[m - 3]) / (2.0 * h);
    return d;
}

std::vector<double> dinv(std::span<const double> f, const Grid& grid) {
    if (static_cast<int>(f.size()) != grid.m)
        throw std::invalid_argument("dinv: sample count does not match grid");
    const int m = grid.m;
    const double h = grid.h();
    const std::vector<double> fp = fd_derivative(f, h);

    std::vector<double> prefix(m, 0.0);
    KahanSum s;
    for (int k = 1; k < m; ++k) {
        s.add(0.5 * h * (f[k - 1] + f[k]));
        prefix[k] = s.sum;
    }

    // Euler-Maclaurin endpoint correction for the moving upper limit.
    const double c0 = h * h / 12.0;
    std::vector<double> out(m);
    for (int k = 0; k < m; ++k) out[k] = prefix[k] - c0 * (fp[k] - fp[0]);
    const double total = out[m - 1];
    for (int k = 0; k < m; ++k) out[k] -= 0.5 * total;
    return out;
}

// ---------------------------------------------------------------------------
// Omega
// ---------------------------------------------------------------------------

bool Omega::contains(std::span<const double> z) const {
    return slack(z) > 0.0;
}

double Omega::slack(std::span<const double> z) const {
    double worst = std::numeric_limits<double>::infinity();
    for (const HalfSpace& hs : constraints) {
        double v = -hs.offset;
        for (std::size_t j = 0; j < hs.coeff.size() && j < z.size(); ++j) v += hs.coeff[j] * z[j];
        worst = std::min(worst, v);
    }
    return worst;
}

bool Omega::origin_admissible() const {
    for (const HalfSpace& hs : constraints)
        if (hs.offset > 0.0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// TestFunction
// ---------------------------------------------------------------------------

TestFunction::TestFunction(int n, std::vector<PolyGauss> components)
    : n_(n), comp_(std::move(components)), derivs_(n) {
    if (n < 1 || static_cast<int>(comp_.size()) != n)
        throw std::invalid_argument("TestFunction: component count must equal n");
    for (int j = 0; j < n_; ++j) derivs_[j].push_back(comp_[j]);
}

const PolyGauss& TestFunction::component(int j) const {
    return comp_.at(j);
}

const PolyGauss& TestFunction::component_derivative(int j, int order) const {
    auto& chain = derivs_.at(j);
    while (static_cast<int>(chain.size()) <= order) chain.push_back(chain.back().derivative());
    return chain[order];
}

JetPoint TestFunction::jet(double x, int max_order) const {
    JetPoint p(x, n_, max_order);
    for (int j = 0; j < n_; ++j)
        for (int i = 0; i <= max_order; ++i) p.set(j + 1, i, component_derivative(j, i)(x));
    return p;
}

double TestFunction::l_cut(int max_order, double eps_tail) const {
    for (int R = 1; R <= 64; ++R) {
        double worst = 0.0;
        for (int j = 0; j < n_; ++j) {
            for (int i = 0; i <= max_order; ++i) {
                const PolyGauss& d = component_derivative(j, i);
                for (double x = R; x <= R + 6.0; x += 0.02)
                    worst = std::max(worst, std::max(std::abs(d(x)), std::abs(d(-x))));
            }
        }
        if (worst < eps_tail) return R;
    }
    return std::numeric_limits<double>::infinity();
}

TestFunction make_test_function(int n, const std::vector<TestFunctionTerm>& terms,
                                const Omega& omega, double delta_omega, const Grid& grid,
                                int working_order, double eps_tail) {
    std::vector<PolyGauss> comps(n);
    for (const TestFunctionTerm& t : terms) {
        if (t.field < 1 || t.field > n)
            throw std::invalid_argument("make_test_function: field index out of range");
        if (t.a <= 0) throw std::invalid_argument("make_test_function: Gaussian rate must be > 0");
        comps[t.field - 1] += PolyGauss({GaussTerm{t.poly, t.a, t.c}});
    }
    TestFunction u(n, std::move(comps));

    const double lc = u.l_cut(working_order, eps_tail);
    if (lc > grid.L)
        throw std::invalid_argument("make_test_function: decay certificate L_cut=" +
                                    std::to_string(lc) + " exceeds grid half-width");

    if (!omega.constraints.empty()) {
        // Check on nodes and midpoints; margin scales with the local envelope.
        const int fine = 2 * grid.m - 1;
        std::vector<double> z(n);
        double s_ref = 0.0;
        std::vector<double> sup_norm(fine, 0.0);
        std::vector<std::vector<double>> vals(fine, std::vector<double>(n));
        for (int k = 0; k < fine; ++k) {
            const double x = -grid.L + grid.h() * 0.5 * k;
            double sn = 0.0;
            for (int j = 0; j < n; ++j) {
                vals[k][j] = u.component(j)(x);
                sn = std::max(sn, std::abs(vals[k][j]));
            }
            sup_norm[k] = sn;
            s_ref = std::max(s_ref, sn);
        }
        for (int k = 0; k < fine; ++k) {
            const double x = -grid.L + grid.h() * 0.5 * k;
            const double sl = omega.slack(vals[k]);
            const double margin =
                s_ref > 0 ? delta_omega * std::min(1.0, sup_norm[k] / s_ref) : 0.0;
            if (!(sl > 0.0) || sl < margin) {
                int worst_j = 0;
                for (int j = 1; j < n; ++j)
                    if (std::abs(vals[k][j]) > std::abs(vals[k][worst_j])) worst_j = j;
                throw OmegaEscapeError("test function image escapes Omega: component " +
                                           std::to_string(worst_j + 1) + " at x = " +
                                           std::to_string(x) + " (value " +
                                           std::to_string(vals[k][worst_j]) + ", slack " +
                                           std::to_string(sl) + ")",
                                       worst_j + 1, x, vals[k][worst_j]);
            }
        }
    }
    return u;
}

}  // namespace wnlpb
