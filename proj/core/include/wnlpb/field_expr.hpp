#pragma once

#include <memory>
#include <vector>

#include "wnlpb/jet_expr.hpp"
#include "wnlpb/schwartz.hpp"

namespace wnlpb {

// Functions of x represented with an exact derivative closure, sampled on one
// fixed grid. Differentiation never falls back to finite differences:
//   - closures differentiate analytically,
//   - a jet expression along a state differentiates by the total derivative,
//   - d(dinv(f))/dx = f.
// Samples and derivatives are cached per node and shared through FieldPtr.

class FieldExpr;
using FieldPtr = std::shared_ptr<FieldExpr>;

// State of n field components; jets are obtained from component derivatives.
using FieldVec = std::vector<FieldPtr>;
using FieldVecPtr = std::shared_ptr<const FieldVec>;

struct MissingDerivativeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class FieldExpr {
public:
    virtual ~FieldExpr() = default;

    const std::vector<double>& samples(const Grid& grid);
    const FieldPtr& derivative();

protected:
    virtual std::vector<double> compute(const Grid& grid) = 0;
    virtual FieldPtr make_derivative() = 0;

private:
    std::vector<double> cache_;
    bool have_samples_ = false;
    Grid cached_grid_;
    FieldPtr deriv_;
};

FieldPtr field_const(double c);
FieldPtr field_closure(PolyGauss pg);
// Precomputed samples; derivative available only if supplied.
FieldPtr field_precomputed(std::vector<double> values, std::vector<double> deriv = {});
// e evaluated along the state u: x -> e(x, jet of u at x).
FieldPtr field_jet_along(Expr e, FieldVecPtr u);
FieldPtr field_dinv(FieldPtr f);
FieldPtr field_sum(std::vector<FieldPtr> parts);
FieldPtr field_prod(std::vector<FieldPtr> parts);
FieldPtr field_scale(double s, FieldPtr f);

FieldVecPtr state_from(const TestFunction& u);
// u + t*k componentwise.
FieldVecPtr perturbed_state(const FieldVecPtr& u, double t, const FieldVecPtr& k);

// Samples every component; throws on non-finite values.
SampledFunction materialize(const std::vector<FieldPtr>& comps, const Grid& grid,
                            bool with_derivative, std::string provenance);

// Strict Omega containment of the state at every grid node.
void check_state_in_omega(const FieldVec& state, const Omega& omega, const Grid& grid,
                          const std::string& what);

}  // namespace wnlpb
