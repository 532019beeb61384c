#include "wnlpb/variational.hpp"

#include <cmath>

namespace wnlpb {

LocalDensity::LocalDensity(Expr phi_, int n_) : phi(simplify(phi_)), n(n_) {
    if (n < 1) throw std::invalid_argument("LocalDensity: n must be >= 1");
    for (const JetVar& v : jet_vars(phi))
        if (v.field > n)
            throw std::invalid_argument("LocalDensity: expression references field " +
                                        std::to_string(v.field) + " but n = " + std::to_string(n));
    order = std::max(0, max_jet_order(phi));
}

WNLChain::WNLChain(LocalDensity outer_, std::vector<std::vector<LocalDensity>> chains_)
    : outer(std::move(outer_)), chains(std::move(chains_)), n(outer.n) {
    for (const auto& chain : chains) {
        if (chain.empty()) throw std::invalid_argument("WNLChain: chain depth must be >= 1");
        for (const LocalDensity& h : chain)
            if (h.n != n) throw std::invalid_argument("WNLChain: densities must share n");
    }
}

namespace {

// hats[alpha][delta-1] = H-hat^{delta}_alpha = dinv(h_{alpha,delta} * H-hat^{delta+1}_alpha),
// with the empty chain tail treated as 1.
std::vector<std::vector<FieldPtr>> build_hat_chains(const WNLChain& c, const FieldVecPtr& u) {
    std::vector<std::vector<FieldPtr>> hats(c.chains.size());
    for (std::size_t alpha = 0; alpha < c.chains.size(); ++alpha) {
        const auto& chain = c.chains[alpha];
        const int D = static_cast<int>(chain.size());
        hats[alpha].resize(D);
        FieldPtr inner;  // H-hat^{delta+1}, null means 1
        for (int delta = D; delta >= 1; --delta) {
            FieldPtr h = field_jet_along(chain[delta - 1].phi, u);
            FieldPtr arg = inner ? field_prod({h, inner}) : h;
            inner = field_dinv(arg);
            hats[alpha][delta - 1] = inner;
        }
    }
    return hats;
}

}  // namespace

FieldPtr density_field(const WNLChain& c, const FieldVecPtr& u) {
    auto hats = build_hat_chains(c, u);
    std::vector<FieldPtr> factors{field_jet_along(c.outer.phi, u)};
    for (std::size_t alpha = 0; alpha < hats.size(); ++alpha) factors.push_back(hats[alpha][0]);
    return field_prod(std::move(factors));
}

double eval_functional(const Functional& F, const FieldVecPtr& u, const Grid& grid) {
    std::vector<FieldPtr> parts;
    for (const auto& [coeff, chain] : F.terms)
        parts.push_back(field_scale(coeff, density_field(chain, u)));
    return integrate(field_sum(std::move(parts))->samples(grid), grid);
}

double eval_functional(const LinearFunctional& F, const FieldVecPtr& u, const Grid& grid) {
    std::vector<FieldPtr> parts;
    for (int j = 0; j < F.n(); ++j)
        parts.push_back(field_prod({field_closure(F.coeff[j]), (*u)[j]}));
    return integrate(field_sum(std::move(parts))->samples(grid), grid);
}

namespace {

// (-d/dx)^r X, with exact differentiation of the mixed representation.
FieldPtr signed_derivative_power(FieldPtr x, int r) {
    FieldPtr out = std::move(x);
    for (int i = 0; i < r; ++i) out = out->derivative();
    return (r % 2 == 1) ? field_scale(-1.0, out) : out;
}

std::vector<FieldPtr> chain_vd(const WNLChain& c, const FieldVecPtr& u) {
    const int n = c.n;
    auto hats = build_hat_chains(c, u);
    const int A = c.num_chains();

    // Check-chains per alpha: check[delta-1] = H-check^{delta}_alpha applied to
    // g * prod_{beta != alpha} H_beta.
    std::vector<std::vector<FieldPtr>> checks(A);
    for (int alpha = 0; alpha < A; ++alpha) {
        std::vector<FieldPtr> gfac{field_jet_along(c.outer.phi, u)};
        for (int beta = 0; beta < A; ++beta)
            if (beta != alpha) gfac.push_back(hats[beta][0]);
        const int D = static_cast<int>(c.chains[alpha].size());
        checks[alpha].resize(D);
        checks[alpha][0] = field_dinv(field_prod(std::move(gfac)));
        for (int delta = 2; delta <= D; ++delta) {
            FieldPtr h = field_jet_along(c.chains[alpha][delta - 2].phi, u);
            checks[alpha][delta - 1] = field_dinv(field_prod({h, checks[alpha][delta - 2]}));
        }
    }

    std::vector<FieldPtr> result(n);
    for (int l = 1; l <= n; ++l) {
        std::vector<FieldPtr> terms;

        // R = (-d/dx)^i [ dphi_g/du_l^{(i)} * prod_alpha H_alpha ]
        for (int i = 0; i <= c.outer.order; ++i) {
            Expr pe = d_partial(c.outer.phi, l, i);
            if (is_zero(pe)) continue;
            std::vector<FieldPtr> factors{field_jet_along(pe, u)};
            for (int alpha = 0; alpha < A; ++alpha) factors.push_back(hats[alpha][0]);
            terms.push_back(signed_derivative_power(field_prod(std::move(factors)), i));
        }

        // T^delta_alpha = (-1)^delta (-d/dx)^k [ Hcheck^delta_alpha(g prod H) *
        //                 dh_{alpha,delta}/du_l^{(k)} * Hhat^{delta+1}_alpha ]
        for (int alpha = 0; alpha < A; ++alpha) {
            const auto& chain = c.chains[alpha];
            const int D = static_cast<int>(chain.size());
            for (int delta = 1; delta <= D; ++delta) {
                const LocalDensity& h = chain[delta - 1];
                for (int k = 0; k <= h.order; ++k) {
                    Expr pe = d_partial(h.phi, l, k);
                    if (is_zero(pe)) continue;
                    std::vector<FieldPtr> factors{checks[alpha][delta - 1],
                                                  field_jet_along(pe, u)};
                    if (delta < D) factors.push_back(hats[alpha][delta]);
                    FieldPtr t = signed_derivative_power(field_prod(std::move(factors)), k);
                    terms.push_back((delta % 2 == 1) ? field_scale(-1.0, t) : t);
                }
            }
        }
        result[l - 1] = field_sum(std::move(terms));
    }
    return result;
}

}  // namespace

std::vector<FieldPtr> variational_derivative(const WNLChain& c, const FieldVecPtr& u) {
    return chain_vd(c, u);
}

std::vector<FieldPtr> variational_derivative(const Functional& F, const FieldVecPtr& u) {
    const int n = F.n();
    std::vector<std::vector<FieldPtr>> parts(n);
    for (const auto& [coeff, chain] : F.terms) {
        auto vd = chain_vd(chain, u);
        for (int j = 0; j < n; ++j) parts[j].push_back(field_scale(coeff, vd[j]));
    }
    std::vector<FieldPtr> out(n);
    for (int j = 0; j < n; ++j) out[j] = field_sum(std::move(parts[j]));
    return out;
}

std::vector<FieldPtr> variational_derivative_local(const LocalDensity& f, const FieldVecPtr& u) {
    return chain_vd(WNLChain(f, {}), u);
}

namespace {

template <typename F>
GateauxResult central_difference_oracle(const F& functional, const FieldVecPtr& u,
                                        const FieldVecPtr& k, const Grid& grid,
                                        const Omega& omega) {
    const double t0 = 1e-3;
    auto value_at = [&](double t) {
        FieldVecPtr state = perturbed_state(u, t, k);
        check_state_in_omega(*state, omega, grid, "perturbed state u + t*k (t = " +
                                                      std::to_string(t) + ")");
        return eval_functional(functional, state, grid);
    };
    auto diff = [&](double t) { return (value_at(t) - value_at(-t)) / (2.0 * t); };
    const double d1 = diff(t0);
    const double d2 = diff(t0 / 2.0);
    GateauxResult r;
    r.value = (4.0 * d2 - d1) / 3.0;
    r.error_estimate = std::abs(d2 - d1) / 3.0;
    return r;
}

}  // namespace

GateauxResult gateaux_oracle(const Functional& F, const FieldVecPtr& u, const FieldVecPtr& k,
                             const Grid& grid, const Omega& omega) {
    return central_difference_oracle(F, u, k, grid, omega);
}

GateauxResult gateaux_oracle(const LinearFunctional& F, const FieldVecPtr& u, const FieldVecPtr& k,
                             const Grid& grid, const Omega& omega) {
    return central_difference_oracle(F, u, k, grid, omega);
}

BoundednessResult boundedness_check(const Functional& F, const FieldVecPtr& u, const Grid& grid) {
    BoundednessResult r;
    auto vd = variational_derivative(F, u);
    for (const FieldPtr& comp : vd) {
        for (double v : comp->samples(grid)) {
            if (!std::isfinite(v)) {
                r.finite = false;
                continue;
            }
            r.sup = std::max(r.sup, std::abs(v));
        }
    }
    return r;
}

}  // namespace wnlpb
