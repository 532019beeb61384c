#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wnlpb/field_expr.hpp"
#include "wnlpb/geometry.hpp"
#include "wnlpb/rng.hpp"
#include "wnlpb/schwartz.hpp"
#include "wnlpb/variational.hpp"

namespace wnlpb {

// Chart data needed to generate admissible random states and directions.
struct ChartSpec {
    int n = 1;
    Omega omega;
    Box subchart;
    double delta_omega = 0.05;
};

struct NotSkewError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operator of Eq.-(poisson) shape applied along the state u:
//   (P v)^i = g^{ij} D_x v_j - g^{is} Gamma^j_{sk} u_x^k v_j
//             + w^i_k u_x^k dinv(w^j_l u_x^l v_j).
// v must carry a derivative closure; D_x of raw samples is never taken.
std::vector<FieldPtr> apply_P(const BracketSpec& spec, const FieldVecPtr& u,
                              const std::vector<FieldPtr>& v);
std::vector<FieldPtr> apply_P(const BracketSpec& spec, const FieldVecPtr& u,
                              const SampledFunction& v);

// Either a linear functional or a WNL chain functional, by address.
struct AnyFunctional {
    const LinearFunctional* linear = nullptr;
    const Functional* chain = nullptr;

    AnyFunctional(const LinearFunctional& f) : linear(&f) {}
    AnyFunctional(const Functional& f) : chain(&f) {}
    std::vector<FieldPtr> vd_fields(const FieldVecPtr& u) const;
    double value(const FieldVecPtr& u, const Grid& grid) const;
};

// {F,G}(u) = int (dF/du_i) (P^{ij} dG/du_j) dx
double bracket(const BracketSpec& spec, const AnyFunctional& F, const AnyFunctional& G,
               const FieldVecPtr& u, const Grid& grid);

// Skew-symmetry preconditions on the triple: g symmetric, nondegenerate,
// Gamma compatible. Required by the closed-form expansion below.
struct SkewnessCheck {
    bool ok = true;
    double g_symmetry_residual = 0.0;
    double compatibility_residual = 0.0;
    double min_abs_det = 0.0;
    std::string reason;
};
SkewnessCheck check_skew_preconditions(const GeometryContext& ctx,
                                       const std::vector<std::vector<double>>& samples,
                                       double tol = 1e-8);

// Closed-form variational derivative of u -> {F,G}(u) for linear F, G on a
// skew-symmetric spec, assembled term by term from the curvature expansion.
SampledFunction vd_of_bracket(const GeometryContext& ctx, const LinearFunctional& F,
                              const LinearFunctional& G, const FieldVecPtr& u, const Grid& grid);

struct Residual {
    double value = 0.0;
    std::uint64_t seed = 0;   // suite seed; trial sub-seeds derive from it
    int worst_trial = -1;
    double tolerance = 0.0;
    bool pass() const { return value <= tolerance; }
};

struct TrialOptions {
    int trials = 32;
    std::uint64_t seed = 1;
    double tolerance = 1e-7;
};

// Deterministic chart-aware generators (reproducible from the sub-seed).
LinearFunctional random_linear_functional(SplitMix64& rng, int n, double L);
TestFunction random_state(SplitMix64& rng, const ChartSpec& chart, const Grid& grid);
// State plus a direction k sharing its envelope, so that u + t*k stays in
// Omega for |t| <= 1e-3 on constrained charts.
std::pair<TestFunction, TestFunction> random_state_and_direction(SplitMix64& rng,
                                                                 const ChartSpec& chart,
                                                                 const Grid& grid);

// max over trials of |{F,G} + {G,F}| / max(1, |{F,G}|, |{G,F}|)
Residual skew_residual(const GeometryContext& ctx, const ChartSpec& chart, const Grid& grid,
                       const TrialOptions& opt);

// max over trials of |cyclic sum {{F,G},H}| / max(1, |{F,G}|, |{G,H}|, |{H,F}|);
// inner variational derivatives from vd_of_bracket, outer pairing via apply_P.
Residual jacobi_residual(const GeometryContext& ctx, const ChartSpec& chart, const Grid& grid,
                         const TrialOptions& opt);

// Recorded-only Jacobi spot check with one non-linear local functional: each
// cyclic term is a Gateaux differential of u -> {X,Y}(u) in the direction
// P dZ/du. Returns nullopt (with a reason) when the perturbed states leave the
// chart, which happens for nonzero w where the direction has bounded tails.
struct SpotCheckResult {
    std::optional<double> residual;
    std::string note;
};
SpotCheckResult jacobi_spot_check(const GeometryContext& ctx, const ChartSpec& chart,
                                  const Grid& grid, const Functional& nonlinear,
                                  std::uint64_t seed);

}  // namespace wnlpb
