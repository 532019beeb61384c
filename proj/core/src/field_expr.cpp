#include "wnlpb/field_expr.hpp"

#include <cmath>
#include <map>

namespace wnlpb {

const std::vector<double>& FieldExpr::samples(const Grid& grid) {
    if (have_samples_) {
        if (!cached_grid_.same(grid))
            throw std::logic_error("FieldExpr: sampled on two different grids");
        return cache_;
    }
    cache_ = compute(grid);
    cached_grid_ = grid;
    have_samples_ = true;
    return cache_;
}

const FieldPtr& FieldExpr::derivative() {
    if (!deriv_) deriv_ = make_derivative();
    return deriv_;
}

namespace {

class ConstField : public FieldExpr {
public:
    explicit ConstField(double c) : c_(c) {}

protected:
    std::vector<double> compute(const Grid& g) override { return std::vector<double>(g.m, c_); }
    FieldPtr make_derivative() override { return field_const(0.0); }

private:
    double c_;
};

class ClosureField : public FieldExpr {
public:
    explicit ClosureField(PolyGauss pg) : pg_(std::move(pg)) {}

protected:
    std::vector<double> compute(const Grid& g) override {
        std::vector<double> out(g.m);
        for (int k = 0; k < g.m; ++k) out[k] = pg_(g.node(k));
        return out;
    }
    FieldPtr make_derivative() override { return field_closure(pg_.derivative()); }

private:
    PolyGauss pg_;
};

class PrecomputedField : public FieldExpr {
public:
    PrecomputedField(std::vector<double> values, std::vector<double> deriv)
        : values_(std::move(values)), deriv_values_(std::move(deriv)) {}

protected:
    std::vector<double> compute(const Grid& g) override {
        if (static_cast<int>(values_.size()) != g.m)
            throw std::invalid_argument("precomputed samples do not match grid");
        return values_;
    }
    FieldPtr make_derivative() override {
        if (deriv_values_.empty())
            throw MissingDerivativeError(
                "sampled function arrived without a derivative channel; derivatives of raw "
                "samples are not taken by differencing");
        return field_precomputed(deriv_values_);
    }

private:
    std::vector<double> values_;
    std::vector<double> deriv_values_;
};

class JetAlongField : public FieldExpr {
public:
    JetAlongField(Expr e, FieldVecPtr u) : e_(std::move(e)), u_(std::move(u)) {}

protected:
    std::vector<double> compute(const Grid& g) override {
        const std::vector<JetVar> vars = jet_vars(e_);
        int max_order = 0;
        for (const JetVar& v : vars) {
            if (v.field < 1 || v.field > static_cast<int>(u_->size()))
                throw std::invalid_argument("jet expression references field " +
                                            std::to_string(v.field) + " beyond the state");
            max_order = std::max(max_order, v.order);
        }
        // Gather required jet sample arrays.
        std::map<std::pair<int, int>, const std::vector<double>*> arrays;
        for (const JetVar& v : vars) {
            FieldPtr comp = (*u_)[v.field - 1];
            for (int i = 0; i < v.order; ++i) comp = comp->derivative();
            arrays[{v.field, v.order}] = &comp->samples(g);
        }
        std::vector<double> out(g.m);
        JetPoint p(0.0, static_cast<int>(u_->size()), max_order);
        for (int k = 0; k < g.m; ++k) {
            p.x = g.node(k);
            for (const auto& [key, arr] : arrays) p.set(key.first, key.second, (*arr)[k]);
            out[k] = eval(e_, p);
        }
        return out;
    }
    FieldPtr make_derivative() override { return field_jet_along(d_total(e_), u_); }

private:
    Expr e_;
    FieldVecPtr u_;
};

class DinvField : public FieldExpr {
public:
    explicit DinvField(FieldPtr f) : f_(std::move(f)) {}

protected:
    std::vector<double> compute(const Grid& g) override { return dinv(f_->samples(g), g); }
    FieldPtr make_derivative() override { return f_; }

private:
    FieldPtr f_;
};

class SumField : public FieldExpr {
public:
    explicit SumField(std::vector<FieldPtr> parts) : parts_(std::move(parts)) {}

protected:
    std::vector<double> compute(const Grid& g) override {
        std::vector<double> out(g.m, 0.0);
        for (const FieldPtr& p : parts_) {
            const auto& s = p->samples(g);
            for (int k = 0; k < g.m; ++k) out[k] += s[k];
        }
        return out;
    }
    FieldPtr make_derivative() override {
        std::vector<FieldPtr> d;
        d.reserve(parts_.size());
        for (const FieldPtr& p : parts_) d.push_back(p->derivative());
        return field_sum(std::move(d));
    }

private:
    std::vector<FieldPtr> parts_;
};

class ProdField : public FieldExpr {
public:
    explicit ProdField(std::vector<FieldPtr> parts) : parts_(std::move(parts)) {}

protected:
    std::vector<double> compute(const Grid& g) override {
        std::vector<double> out(g.m, 1.0);
        for (const FieldPtr& p : parts_) {
            const auto& s = p->samples(g);
            for (int k = 0; k < g.m; ++k) out[k] *= s[k];
        }
        return out;
    }
    FieldPtr make_derivative() override {
        std::vector<FieldPtr> terms;
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            std::vector<FieldPtr> factors = parts_;
            factors[i] = parts_[i]->derivative();
            terms.push_back(field_prod(std::move(factors)));
        }
        return field_sum(std::move(terms));
    }

private:
    std::vector<FieldPtr> parts_;
};

class ScaleField : public FieldExpr {
public:
    ScaleField(double s, FieldPtr f) : s_(s), f_(std::move(f)) {}

protected:
    std::vector<double> compute(const Grid& g) override {
        std::vector<double> out = f_->samples(g);
        for (double& v : out) v *= s_;
        return out;
    }
    FieldPtr make_derivative() override { return field_scale(s_, f_->derivative()); }

private:
    double s_;
    FieldPtr f_;
};

}  // namespace

FieldPtr field_const(double c) { return std::make_shared<ConstField>(c); }
FieldPtr field_closure(PolyGauss pg) { return std::make_shared<ClosureField>(std::move(pg)); }
FieldPtr field_precomputed(std::vector<double> values, std::vector<double> deriv) {
    return std::make_shared<PrecomputedField>(std::move(values), std::move(deriv));
}
FieldPtr field_jet_along(Expr e, FieldVecPtr u) {
    return std::make_shared<JetAlongField>(std::move(e), std::move(u));
}
FieldPtr field_dinv(FieldPtr f) { return std::make_shared<DinvField>(std::move(f)); }
FieldPtr field_sum(std::vector<FieldPtr> parts) {
    if (parts.empty()) return field_const(0.0);
    if (parts.size() == 1) return parts[0];
    return std::make_shared<SumField>(std::move(parts));
}
FieldPtr field_prod(std::vector<FieldPtr> parts) {
    if (parts.empty()) return field_const(1.0);
    if (parts.size() == 1) return parts[0];
    return std::make_shared<ProdField>(std::move(parts));
}
FieldPtr field_scale(double s, FieldPtr f) {
    if (s == 1.0) return f;
    return std::make_shared<ScaleField>(s, std::move(f));
}

FieldVecPtr state_from(const TestFunction& u) {
    auto vec = std::make_shared<FieldVec>();
    for (int j = 0; j < u.n(); ++j) vec->push_back(field_closure(u.component(j)));
    return vec;
}

FieldVecPtr perturbed_state(const FieldVecPtr& u, double t, const FieldVecPtr& k) {
    if (u->size() != k->size())
        throw std::invalid_argument("perturbed_state: component counts differ");
    auto vec = std::make_shared<FieldVec>();
    for (std::size_t j = 0; j < u->size(); ++j)
        vec->push_back(field_sum({(*u)[j], field_scale(t, (*k)[j])}));
    return vec;
}

SampledFunction materialize(const std::vector<FieldPtr>& comps, const Grid& grid,
                            bool with_derivative, std::string provenance) {
    SampledFunction out;
    out.n = static_cast<int>(comps.size());
    out.provenance = std::move(provenance);
    for (const FieldPtr& c : comps) {
        const auto& v = c->samples(grid);
        for (double x : v)
            if (!std::isfinite(x))
                throw std::runtime_error("non-finite sample while materializing " + out.provenance);
        out.values.push_back(v);
        if (with_derivative) {
            const auto& d = c->derivative()->samples(grid);
            for (double x : d)
                if (!std::isfinite(x))
                    throw std::runtime_error("non-finite derivative sample while materializing " +
                                             out.provenance);
            out.deriv.push_back(d);
        }
    }
    return out;
}

void check_state_in_omega(const FieldVec& state, const Omega& omega, const Grid& grid,
                          const std::string& what) {
    if (omega.constraints.empty()) return;
    std::vector<const std::vector<double>*> vals;
    for (const FieldPtr& c : state) vals.push_back(&c->samples(grid));
    std::vector<double> z(state.size());
    for (int k = 0; k < grid.m; ++k) {
        for (std::size_t j = 0; j < state.size(); ++j) z[j] = (*vals[j])[k];
        if (!omega.contains(z))
            throw OmegaEscapeError(what + " escapes Omega at x = " + std::to_string(grid.node(k)),
                                   0, grid.node(k), z.empty() ? 0.0 : z[0]);
    }
}

}  // namespace wnlpb
