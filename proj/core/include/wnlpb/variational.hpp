#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wnlpb/field_expr.hpp"
#include "wnlpb/jet_expr.hpp"
#include "wnlpb/schwartz.hpp"

namespace wnlpb {

// A local density u |-> phi(x, u, u_x, ..., u^{(N)}).
struct LocalDensity {
    Expr phi;
    int n = 1;
    int order = 0;  // max jet order appearing in phi

    LocalDensity() = default;
    LocalDensity(Expr phi_, int n_);
};

// Density of the form g * prod_alpha dinv(h_{alpha,1} dinv( ... dinv(h_{alpha,D_alpha}) )).
// chains[alpha] lists the densities outermost first. A = 0 is the local case.
struct WNLChain {
    LocalDensity outer;
    std::vector<std::vector<LocalDensity>> chains;
    int n = 1;

    WNLChain() = default;
    WNLChain(LocalDensity outer_, std::vector<std::vector<LocalDensity>> chains_);
    int num_chains() const { return static_cast<int>(chains.size()); }
};

// R-linear combination of chain densities, with a descriptor name.
struct Functional {
    std::string name;
    std::vector<std::pair<double, WNLChain>> terms;

    Functional() = default;
    Functional(std::string name_, WNLChain chain) : name(std::move(name_)) {
        terms.emplace_back(1.0, std::move(chain));
    }
    int n() const { return terms.empty() ? 1 : terms.front().second.n; }
};

// F(u) = int alpha_i(x) u^i(x) dx; the variational derivative is alpha itself.
struct LinearFunctional {
    std::vector<PolyGauss> coeff;
    int n() const { return static_cast<int>(coeff.size()); }
};

// The WNL density materialized along the state u (chains via dinv).
FieldPtr density_field(const WNLChain& c, const FieldVecPtr& u);

double eval_functional(const Functional& F, const FieldVecPtr& u, const Grid& grid);
double eval_functional(const LinearFunctional& F, const FieldVecPtr& u, const Grid& grid);

// Variational derivative along u, one field per component. Each returned field
// carries an exact derivative closure (mixed symbolic/dinv representation).
std::vector<FieldPtr> variational_derivative(const WNLChain& c, const FieldVecPtr& u);
std::vector<FieldPtr> variational_derivative(const Functional& F, const FieldVecPtr& u);
std::vector<FieldPtr> variational_derivative_local(const LocalDensity& f, const FieldVecPtr& u);

struct GateauxResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

// Central difference (F[u+tk] - F[u-tk])/(2t), Richardson-extrapolated over
// t in {1e-3, 5e-4}. Omega containment of the perturbed states is enforced.
GateauxResult gateaux_oracle(const Functional& F, const FieldVecPtr& u, const FieldVecPtr& k,
                             const Grid& grid, const Omega& omega);
GateauxResult gateaux_oracle(const LinearFunctional& F, const FieldVecPtr& u, const FieldVecPtr& k,
                             const Grid& grid, const Omega& omega);

struct BoundednessResult {
    double sup = 0.0;
    bool finite = true;
};

BoundednessResult boundedness_check(const Functional& F, const FieldVecPtr& u, const Grid& grid);

}  // namespace wnlpb
