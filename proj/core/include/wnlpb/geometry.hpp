#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wnlpb/jet_expr.hpp"
#include "wnlpb/schwartz.hpp"

namespace wnlpb {

// The triple (g, Gamma, w) of a hydrodynamic-type bracket on a chart:
// g^{ij} contravariant, Gamma^a_{bc} connection coefficients, w^i_j type (1,1).
// All entries depend on u only (order-0 jets, no x).
struct BracketSpec {
    int n = 1;
    std::vector<Expr> g;      // [i*n + j]
    std::vector<Expr> gamma;  // [(a*n + b)*n + c] = Gamma^a_{bc}
    std::vector<Expr> w;      // [i*n + j]
    bool gamma_derived = false;  // provenance: derived Levi-Civita vs user-supplied
    std::string name;

    const Expr& g_at(int i, int j) const { return g[i * n + j]; }
    const Expr& gamma_at(int a, int b, int c) const { return gamma[(a * n + b) * n + c]; }
    const Expr& w_at(int i, int j) const { return w[i * n + j]; }
};

// Symbolic inverse of the contravariant metric (adjugate over determinant).
std::vector<Expr> covariant_metric(const std::vector<Expr>& g, int n);
Expr sym_determinant(const std::vector<Expr>& m, int n);

// Christoffel symbols of the Levi-Civita connection of g, as expressions in u.
// Covariant derivatives of g are obtained from the sandwich identity
// d_k g_{ij} = -g_{ia} (d_k g^{ab}) g_{bj}, keeping everything symbolic.
std::vector<Expr> levi_civita(const std::vector<Expr>& g, int n);

// R^{ij}_{pk} = g^{is}(dGamma^j_{sp}/du^k - dGamma^j_{sk}/du^p
//               + Gamma^l_{sp} Gamma^j_{lk} - Gamma^l_{sk} Gamma^j_{lp}).
std::vector<Expr> riemann(const BracketSpec& spec);  // [((i*n + j)*n + p)*n + k]

// Pointwise tensor values at z, shared by the geometric checks and by the
// bracket engine. Built once per spec; evaluation is pole-aware (throws
// EvalError at inadmissible points).
class GeometryContext {
public:
    explicit GeometryContext(const BracketSpec& spec);

    struct Values {
        int n;
        std::vector<double> g;      // n^2
        std::vector<double> gamma;  // n^3
        std::vector<double> w;      // n^2
        std::vector<double> dg;     // [(k*n + i)*n + j] = d_k g^{ij}
        std::vector<double> dw;     // [(p*n + i)*n + j] = d_p w^i_j
        std::vector<double> riem;   // n^4
        double det_g;

        double G(int i, int j) const { return g[i * n + j]; }
        double Gam(int a, int b, int c) const { return gamma[(a * n + b) * n + c]; }
        double W(int i, int j) const { return w[i * n + j]; }
        double dG(int k, int i, int j) const { return dg[(k * n + i) * n + j]; }
        double dW(int p, int i, int j) const { return dw[(p * n + i) * n + j]; }
        double R(int i, int j, int p, int k) const {
            return riem[((i * n + j) * n + p) * n + k];
        }
    };

    Values eval_at(std::span<const double> z) const;
    const BracketSpec& spec() const { return spec_; }
    const std::vector<Expr>& riemann_exprs() const { return riem_; }

private:
    BracketSpec spec_;
    std::vector<Expr> dg_, dw_, riem_;
};

struct ConditionResult {
    std::string name;
    double max_residual = 0.0;
    std::vector<double> worst_point;
    bool pass = true;
};

struct GeometryReport {
    ConditionResult g_symmetry, compatibility, gpc1, gpc2, gpc3, gpc4;
    ConditionResult coeff_a, coeff_b, coeff_c, coeff_d, coeff_e, coeff_m;
    double min_abs_det = 0.0;
    bool nondegenerate = true;
    // Max |Gamma_supplied - Gamma_LeviCivita| over samples; set when the config
    // supplied Gamma explicitly.
    std::optional<double> gamma_divergence;
    int sample_count = 0;

    bool gpc_pass() const {
        return gpc1.pass && gpc2.pass && gpc3.pass && gpc4.pass && g_symmetry.pass &&
               compatibility.pass && nondegenerate;
    }
    bool coeff_pass() const {
        return coeff_b.pass && coeff_d.pass && coeff_e.pass && coeff_m.pass;
    }
};

// Numeric coefficient tensors of the Jacobi integrand at (z, u_x); a and c are
// returned contracted against u_x, the others are u_x-free.
struct CoefficientTensors {
    int n = 1;
    std::vector<double> a;  // n^3, [ (i*n + j)*n + l ]
    std::vector<double> b;  // n^4, [ ((i*n + j)*n + l)*n + k ]
    std::vector<double> c;  // n^2, [ j*n + l ]
    std::vector<double> d;  // n^3
    std::vector<double> e;  // n^3, [ (i*n + j)*n + k ]
    std::vector<double> m;  // n^2

    double max_abs(const std::vector<double>& t) const;
};

CoefficientTensors coefficient_tensors(const GeometryContext& ctx, std::span<const double> z,
                                       std::span<const double> ux);

// Deterministic low-discrepancy samples over the subchart box, rejecting
// points within delta_omega of the Omega boundary.
std::vector<std::vector<double>> sample_points(const Box& box, const Omega& omega,
                                               double delta_omega, int count);

struct GeometryTolerances {
    double gpc = 1e-8;
    double coefficients = 1e-8;
    double nondegeneracy = 1e-10;  // min |det g| allowed
};

// Full pointwise suite: symmetry, compatibility, nondegeneracy, GPC:1-4 and
// the coefficient tensors (a, c evaluated against a deterministic random u_x).
GeometryReport gpc_check(const GeometryContext& ctx,
                         const std::vector<std::vector<double>>& samples,
                         const GeometryTolerances& tol, std::uint64_t ux_seed = 1);

struct AuditMismatch {
    std::vector<double> point;
    double coeff_residual;
    double gpc_residual;
};

struct AuditReport {
    int samples = 0;
    std::vector<AuditMismatch> mismatches;
    bool pass() const { return mismatches.empty(); }
};

// claim: (b,d,e,m all within tol) <=> (GPC:1-4 all within tol) at every sample.
AuditReport equivalence_audit(const GeometryContext& ctx,
                              const std::vector<std::vector<double>>& samples,
                              double tol_coeff, double tol_gpc);

// Pointwise GPC residuals at one sample (max over indices per condition).
struct PointResiduals {
    double gpc1, gpc2, gpc3, gpc4, g_symmetry, compatibility;
    double max_gpc() const;
};
PointResiduals point_residuals(const GeometryContext::Values& v);

}  // namespace wnlpb
