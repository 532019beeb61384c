#include "wnlpb/bracket.hpp"

#include <cmath>

namespace wnlpb {

namespace {

// Contracted operator coefficients as jet expressions:
//   A^{ij} = g^{is} Gamma^j_{sk} u_x^k,   W^i = w^i_k u_x^k.
std::vector<Expr> contracted_gamma(const BracketSpec& spec) {
    const int n = spec.n;
    std::vector<Expr> A(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Expr acc;
            for (int s = 0; s < n; ++s)
                for (int k = 0; k < n; ++k) {
                    Expr term = mul(mul(spec.g_at(i, s), spec.gamma_at(j, s, k)),
                                    jet_var(k + 1, 1));
                    acc = acc ? add(acc, term) : term;
                }
            A[i * n + j] = simplify(acc);
        }
    return A;
}

std::vector<Expr> contracted_w(const BracketSpec& spec) {
    const int n = spec.n;
    std::vector<Expr> W(n);
    for (int i = 0; i < n; ++i) {
        Expr acc;
        for (int k = 0; k < n; ++k) {
            Expr term = mul(spec.w_at(i, k), jet_var(k + 1, 1));
            acc = acc ? add(acc, term) : term;
        }
        W[i] = simplify(acc);
    }
    return W;
}

}  // namespace

std::vector<FieldPtr> apply_P(const BracketSpec& spec, const FieldVecPtr& u,
                              const std::vector<FieldPtr>& v) {
    const int n = spec.n;
    if (static_cast<int>(v.size()) != n)
        throw std::invalid_argument("apply_P: component count mismatch");
    const std::vector<Expr> A = contracted_gamma(spec);
    const std::vector<Expr> W = contracted_w(spec);

    bool any_w = false;
    for (const Expr& e : W)
        if (!is_zero(e)) any_w = true;

    FieldPtr tail_dinv;
    if (any_w) {
        std::vector<FieldPtr> parts;
        for (int j = 0; j < n; ++j)
            if (!is_zero(W[j])) parts.push_back(field_prod({field_jet_along(W[j], u), v[j]}));
        tail_dinv = field_dinv(field_sum(std::move(parts)));
    }

    std::vector<FieldPtr> out(n);
    for (int i = 0; i < n; ++i) {
        std::vector<FieldPtr> parts;
        for (int j = 0; j < n; ++j) {
            const Expr& gij = spec.g_at(i, j);
            if (!is_zero(gij))
                parts.push_back(field_prod({field_jet_along(gij, u), v[j]->derivative()}));
            if (!is_zero(A[i * n + j]))
                parts.push_back(
                    field_scale(-1.0, field_prod({field_jet_along(A[i * n + j], u), v[j]})));
        }
        if (any_w && !is_zero(W[i]))
            parts.push_back(field_prod({field_jet_along(W[i], u), tail_dinv}));
        out[i] = field_sum(std::move(parts));
    }
    return out;
}

std::vector<FieldPtr> apply_P(const BracketSpec& spec, const FieldVecPtr& u,
                              const SampledFunction& v) {
    if (!v.has_derivative())
        throw MissingDerivativeError(
            "apply_P: sampled function '" + v.provenance +
            "' has no derivative channel; supply the exact-derivative representation");
    std::vector<FieldPtr> fields;
    for (int j = 0; j < v.n; ++j) fields.push_back(field_precomputed(v.values[j], v.deriv[j]));
    return apply_P(spec, u, fields);
}

std::vector<FieldPtr> AnyFunctional::vd_fields(const FieldVecPtr& u) const {
    if (linear) {
        std::vector<FieldPtr> out;
        for (const PolyGauss& c : linear->coeff) out.push_back(field_closure(c));
        return out;
    }
    return variational_derivative(*chain, u);
}

double AnyFunctional::value(const FieldVecPtr& u, const Grid& grid) const {
    if (linear) return eval_functional(*linear, u, grid);
    return eval_functional(*chain, u, grid);
}

double bracket(const BracketSpec& spec, const AnyFunctional& F, const AnyFunctional& G,
               const FieldVecPtr& u, const Grid& grid) {
    const std::vector<FieldPtr> vdF = F.vd_fields(u);
    const std::vector<FieldPtr> Pv = apply_P(spec, u, G.vd_fields(u));
    std::vector<FieldPtr> parts;
    for (int i = 0; i < spec.n; ++i) parts.push_back(field_prod({vdF[i], Pv[i]}));
    return integrate(field_sum(std::move(parts))->samples(grid), grid);
}

SkewnessCheck check_skew_preconditions(const GeometryContext& ctx,
                                       const std::vector<std::vector<double>>& samples,
                                       double tol) {
    SkewnessCheck r;
    r.min_abs_det = std::numeric_limits<double>::infinity();
    for (const auto& z : samples) {
        const auto v = ctx.eval_at(z);
        const PointResiduals pr = point_residuals(v);
        r.g_symmetry_residual = std::max(r.g_symmetry_residual, pr.g_symmetry);
        r.compatibility_residual = std::max(r.compatibility_residual, pr.compatibility);
        r.min_abs_det = std::min(r.min_abs_det, std::abs(v.det_g));
    }
    if (r.g_symmetry_residual > tol) {
        r.ok = false;
        r.reason = "metric is not symmetric";
    } else if (r.compatibility_residual > tol) {
        r.ok = false;
        r.reason = "connection is not compatible with the metric";
    } else if (!(r.min_abs_det > 1e-12)) {
        r.ok = false;
        r.reason = "metric is degenerate on the subchart";
    }
    return r;
}

namespace {

// Tensor samples along u, shared by the expansion terms of vd_of_bracket.
struct TensorField {
    int n;
    int m;
    std::vector<std::vector<double>> uval;   // [j][node]
    std::vector<std::vector<double>> ux;     // [j][node]
    std::vector<std::vector<double>> g;      // [i*n+j][node]
    std::vector<std::vector<double>> gamma;  // [(a*n+b)*n+c][node]
    std::vector<std::vector<double>> w;      // [i*n+j][node]
    std::vector<std::vector<double>> dw;     // [(p*n+i)*n+j][node]
    std::vector<std::vector<double>> riem;   // [n^4][node]
};

TensorField build_tensor_field(const GeometryContext& ctx, const FieldVecPtr& u,
                               const Grid& grid) {
    const BracketSpec& spec = ctx.spec();
    const int n = spec.n;
    TensorField tf;
    tf.n = n;
    tf.m = grid.m;
    for (int j = 0; j < n; ++j) {
        tf.uval.push_back((*u)[j]->samples(grid));
        tf.ux.push_back((*u)[j]->derivative()->samples(grid));
    }
    std::vector<double> z(n);
    tf.g.resize(n * n);
    tf.gamma.resize(n * n * n);
    tf.w.resize(n * n);
    tf.dw.resize(n * n * n);
    tf.riem.resize(n * n * n * n);
    for (auto* v : {&tf.g, &tf.w})
        for (auto& arr : *v) arr.resize(grid.m);
    for (auto* v : {&tf.gamma, &tf.dw})
        for (auto& arr : *v) arr.resize(grid.m);
    for (auto& arr : tf.riem) arr.resize(grid.m);

    for (int k = 0; k < grid.m; ++k) {
        for (int j = 0; j < n; ++j) z[j] = tf.uval[j][k];
        const auto v = ctx.eval_at(z);
        for (int i = 0; i < n * n; ++i) tf.g[i][k] = v.g[i];
        for (int i = 0; i < n * n * n; ++i) tf.gamma[i][k] = v.gamma[i];
        for (int i = 0; i < n * n; ++i) tf.w[i][k] = v.w[i];
        for (int i = 0; i < n * n * n; ++i) tf.dw[i][k] = v.dw[i];
        for (int i = 0; i < n * n * n * n; ++i) tf.riem[i][k] = v.riem[i];
    }
    return tf;
}

SampledFunction vd_of_bracket_assembled(const TensorField& tf, const LinearFunctional& F,
                                        const LinearFunctional& G, const Grid& grid) {
    const int n = tf.n;
    const int m = tf.m;
    auto G2 = [&](int i, int j, int k) { return tf.g[i * n + j][k]; };
    auto Gam = [&](int a, int b, int c, int k) { return tf.gamma[(a * n + b) * n + c][k]; };
    auto W = [&](int i, int j, int k) { return tf.w[i * n + j][k]; };
    auto dW = [&](int p, int i, int j, int k) { return tf.dw[(p * n + i) * n + j][k]; };
    auto R = [&](int i, int j, int p, int q, int k) {
        return tf.riem[((i * n + j) * n + p) * n + q][k];
    };

    std::vector<std::vector<double>> fv(n), fdv(n), gv(n), gdv(n);
    for (int j = 0; j < n; ++j) {
        fv[j].resize(m);
        fdv[j].resize(m);
        gv[j].resize(m);
        gdv[j].resize(m);
        const PolyGauss fd = F.coeff[j].derivative();
        const PolyGauss gd = G.coeff[j].derivative();
        for (int k = 0; k < m; ++k) {
            const double x = grid.node(k);
            fv[j][k] = F.coeff[j](x);
            fdv[j][k] = fd(x);
            gv[j][k] = G.coeff[j](x);
            gdv[j][k] = gd(x);
        }
    }

    // tilde_f = dinv(w^i_k u_x^k f_i), tilde_g analogous
    std::vector<double> psi_f(m, 0.0), psi_g(m, 0.0);
    for (int k = 0; k < m; ++k) {
        for (int i = 0; i < n; ++i) {
            double wi = 0.0;
            for (int s = 0; s < n; ++s) wi += W(i, s, k) * tf.ux[s][k];
            psi_f[k] += wi * fv[i][k];
            psi_g[k] += wi * gv[i][k];
        }
    }
    const std::vector<double> tilde_f = dinv(psi_f, grid);
    const std::vector<double> tilde_g = dinv(psi_g, grid);

    SampledFunction out;
    out.n = n;
    out.provenance = "vd_of_bracket";
    out.values.assign(n, std::vector<double>(m, 0.0));

    for (int p = 0; p < n; ++p) {
        auto& dest = out.values[p];
        for (int k = 0; k < m; ++k) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    double t1 = 0.0, t2 = 0.0;
                    for (int s = 0; s < n; ++s) {
                        t1 += G2(i, s, k) * Gam(j, s, p, k);
                        t2 += G2(s, j, k) * Gam(i, s, p, k);
                    }
                    acc += fdv[i][k] * t1 * gv[j][k] - fv[i][k] * t2 * gdv[j][k];
                    double t3 = 0.0, t4 = 0.0, t5 = 0.0;
                    for (int q = 0; q < n; ++q) {
                        t3 += tf.ux[q][k] * R(i, j, p, q, k);
                        double gl = 0.0;
                        for (int s = 0; s < n; ++s)
                            for (int l = 0; l < n; ++l)
                                gl += G2(s, l, k) * (Gam(i, s, p, k) * Gam(j, l, q, k) -
                                                     Gam(i, s, q, k) * Gam(j, l, p, k));
                        t4 += tf.ux[q][k] * gl;
                        t5 += tf.ux[q][k] *
                              (W(i, q, k) * W(j, p, k) - W(i, p, k) * W(j, q, k));
                    }
                    acc += fv[i][k] * gv[j][k] * (t3 + t4 + t5);
                }
                // tilde blocks share the w-curl contraction
                double curl = 0.0;
                for (int q = 0; q < n; ++q)
                    curl += tf.ux[q][k] * (dW(p, i, q, k) - dW(q, i, p, k));
                acc += (fv[i][k] * curl - fdv[i][k] * W(i, p, k)) * tilde_g[k];
                acc -= (gv[i][k] * curl - gdv[i][k] * W(i, p, k)) * tilde_f[k];
            }
            dest[k] = acc;
        }
    }
    return out;
}

}  // namespace

SampledFunction vd_of_bracket(const GeometryContext& ctx, const LinearFunctional& F,
                              const LinearFunctional& G, const FieldVecPtr& u, const Grid& grid) {
    const TensorField tf = build_tensor_field(ctx, u, grid);
    return vd_of_bracket_assembled(tf, F, G, grid);
}

// ---------------------------------------------------------------------------
// Trial generation
// ---------------------------------------------------------------------------

LinearFunctional random_linear_functional(SplitMix64& rng, int n, double L) {
    LinearFunctional f;
    f.coeff.resize(n);
    for (int j = 0; j < n; ++j) {
        for (int b = 0; b < 3; ++b) {
            const double amp = rng.uniform(-1.0, 1.0);
            const double center = rng.uniform(-L / 2.0, L / 2.0);
            double width = rng.uniform(0.5, 2.0);
            // keep integration-by-parts boundary terms at +-L below the tail
            // floor: bump value at the edge stays under ~1e-10
            width = std::min(width, (L - std::abs(center)) / 4.8);
            f.coeff[j] += PolyGauss::gaussian(amp, 1.0 / (width * width), center);
        }
    }
    return f;
}

namespace {

// amp * exp(-a1 (x-c)^2) * exp(-a0 x^2) collapsed into a single Gaussian term.
GaussTerm gaussian_product_term(double amp, double a1, double c, double a0) {
    const double a = a0 + a1;
    const double c_new = a1 * c / a;
    const double scale = std::exp(-a0 * a1 * c * c / a);
    return GaussTerm{{amp * scale}, a, c_new};
}

struct StatePair {
    TestFunction u;
    TestFunction k;
};

StatePair generate_pair(SplitMix64& rng, const ChartSpec& chart, const Grid& grid) {
    const int n = chart.n;
    if (chart.omega.constraints.empty()) {
        std::vector<PolyGauss> ucomp(n), kcomp(n);
        for (int j = 0; j < n; ++j) {
            for (int b = 0; b < 2; ++b) {
                const double amp = rng.uniform(-0.4, 0.4);
                const double center = rng.uniform(-2.0, 2.0);
                const double width = rng.uniform(1.0, 2.0);
                ucomp[j] += PolyGauss::gaussian(amp, 1.0 / (width * width), center);
            }
            const double amp = rng.uniform(-0.5, 0.5);
            const double center = rng.uniform(-2.0, 2.0);
            const double width = rng.uniform(0.8, 2.0);
            kcomp[j] += PolyGauss::gaussian(amp, 1.0 / (width * width), center);
        }
        return {TestFunction(n, std::move(ucomp)), TestFunction(n, std::move(kcomp))};
    }

    // Constrained chart: anchor in the subchart box, every component damped by
    // a shared envelope so constraint slack scales with the envelope.
    for (int attempt = 0; attempt < 16; ++attempt) {
        std::vector<double> anchor(n);
        for (int j = 0; j < n; ++j) {
            const double lo = chart.subchart.lo[j], hi = chart.subchart.hi[j];
            anchor[j] = rng.uniform(lo + 0.2 * (hi - lo), hi - 0.2 * (hi - lo));
        }
        const double s0 = chart.omega.slack(anchor);
        if (!(s0 > 0)) continue;
        double l1_max = 1.0;
        for (const HalfSpace& hs : chart.omega.constraints) {
            double l1 = 0.0;
            for (double cj : hs.coeff) l1 += std::abs(cj);
            l1_max = std::max(l1_max, l1);
        }
        const double rho = 0.5 * s0 / l1_max;

        const double sigma0 = rng.uniform(2.0, 3.0);
        const double a0 = 1.0 / (sigma0 * sigma0);
        std::vector<PolyGauss> ucomp(n), kcomp(n);
        for (int j = 0; j < n; ++j) {
            std::vector<GaussTerm> terms;
            terms.push_back(GaussTerm{{anchor[j]}, a0, 0.0});
            const double amp = rng.uniform(-rho, rho) * 0.5;
            const double center = rng.uniform(-1.5, 1.5);
            const double width = rng.uniform(0.8, 1.5);
            terms.push_back(gaussian_product_term(amp, 1.0 / (width * width), center, a0));
            ucomp[j] = PolyGauss(std::move(terms));

            const double kamp = rng.uniform(-rho, rho) * 0.4;
            const double kcenter = rng.uniform(-1.5, 1.5);
            const double kwidth = rng.uniform(0.8, 1.5);
            kcomp[j] = PolyGauss(
                {gaussian_product_term(kamp, 1.0 / (kwidth * kwidth), kcenter, a0)});
        }
        TestFunction u(n, std::move(ucomp));
        TestFunction k(n, std::move(kcomp));
        // Validate strictly on the grid; retry with a fresh draw on failure.
        bool ok = true;
        std::vector<double> z(n);
        for (int node = 0; node < grid.m && ok; ++node) {
            const double x = grid.node(node);
            for (int j = 0; j < n; ++j) z[j] = u.component(j)(x);
            if (!chart.omega.contains(z)) ok = false;
        }
        if (ok) return {std::move(u), std::move(k)};
    }
    throw std::runtime_error("random_state: could not generate an admissible state");
}

}  // namespace

TestFunction random_state(SplitMix64& rng, const ChartSpec& chart, const Grid& grid) {
    return generate_pair(rng, chart, grid).u;
}

std::pair<TestFunction, TestFunction> random_state_and_direction(SplitMix64& rng,
                                                                 const ChartSpec& chart,
                                                                 const Grid& grid) {
    StatePair p = generate_pair(rng, chart, grid);
    return {std::move(p.u), std::move(p.k)};
}

// ---------------------------------------------------------------------------
// Residual suites
// ---------------------------------------------------------------------------

Residual skew_residual(const GeometryContext& ctx, const ChartSpec& chart, const Grid& grid,
                       const TrialOptions& opt) {
    Residual r;
    r.seed = opt.seed;
    r.tolerance = opt.tolerance;
    for (int t = 0; t < opt.trials; ++t) {
        SplitMix64 rng(derive_seed(opt.seed, t));
        const LinearFunctional F = random_linear_functional(rng, chart.n, grid.L);
        const LinearFunctional G = random_linear_functional(rng, chart.n, grid.L);
        const TestFunction u = random_state(rng, chart, grid);
        const FieldVecPtr state = state_from(u);
        const double b1 = bracket(ctx.spec(), F, G, state, grid);
        const double b2 = bracket(ctx.spec(), G, F, state, grid);
        const double res = std::abs(b1 + b2) / std::max({1.0, std::abs(b1), std::abs(b2)});
        if (res > r.value) {
            r.value = res;
            r.worst_trial = t;
        }
    }
    return r;
}

Residual jacobi_residual(const GeometryContext& ctx, const ChartSpec& chart, const Grid& grid,
                         const TrialOptions& opt) {
    Residual r;
    r.seed = opt.seed;
    r.tolerance = opt.tolerance;
    const BracketSpec& spec = ctx.spec();
    for (int t = 0; t < opt.trials; ++t) {
        SplitMix64 rng(derive_seed(opt.seed, t));
        const LinearFunctional F = random_linear_functional(rng, chart.n, grid.L);
        const LinearFunctional G = random_linear_functional(rng, chart.n, grid.L);
        const LinearFunctional H = random_linear_functional(rng, chart.n, grid.L);
        const TestFunction u = random_state(rng, chart, grid);
        const FieldVecPtr state = state_from(u);

        const TensorField tf = build_tensor_field(ctx, state, grid);
        auto pair_with = [&](const SampledFunction& vd, const LinearFunctional& Z) {
            std::vector<FieldPtr> zp;
            for (const PolyGauss& c : Z.coeff) zp.push_back(field_closure(c));
            const std::vector<FieldPtr> Pz = apply_P(spec, state, zp);
            std::vector<double> integrand(grid.m, 0.0);
            for (int p = 0; p < spec.n; ++p) {
                const auto& s = Pz[p]->samples(grid);
                for (int k = 0; k < grid.m; ++k) integrand[k] += vd.values[p][k] * s[k];
            }
            return integrate(integrand, grid);
        };

        const SampledFunction vdFG = vd_of_bracket_assembled(tf, F, G, grid);
        const SampledFunction vdGH = vd_of_bracket_assembled(tf, G, H, grid);
        const SampledFunction vdHF = vd_of_bracket_assembled(tf, H, F, grid);
        const double j1 = pair_with(vdFG, H);
        const double j2 = pair_with(vdGH, F);
        const double j3 = pair_with(vdHF, G);
        const double cyc = j1 + j2 + j3;

        const double bFG = bracket(spec, F, G, state, grid);
        const double bGH = bracket(spec, G, H, state, grid);
        const double bHF = bracket(spec, H, F, state, grid);
        const double scale = std::max({1.0, std::abs(bFG), std::abs(bGH), std::abs(bHF)});
        const double res = std::abs(cyc) / scale;
        if (res > r.value) {
            r.value = res;
            r.worst_trial = t;
        }
    }
    return r;
}

SpotCheckResult jacobi_spot_check(const GeometryContext& ctx, const ChartSpec& chart,
                                  const Grid& grid, const Functional& nonlinear,
                                  std::uint64_t seed) {
    SpotCheckResult out;
    const BracketSpec& spec = ctx.spec();
    SplitMix64 rng(derive_seed(seed, 9001));
    const LinearFunctional G = random_linear_functional(rng, chart.n, grid.L);
    const LinearFunctional H = random_linear_functional(rng, chart.n, grid.L);
    const TestFunction u = random_state(rng, chart, grid);
    const FieldVecPtr state = state_from(u);

    const AnyFunctional aF(nonlinear), aG(G), aH(H);
    try {
        auto direction = [&](const AnyFunctional& Z) {
            return std::make_shared<const FieldVec>(apply_P(spec, state, Z.vd_fields(state)));
        };
        // d_G({X,Y})(u)[P dZ/du], central difference with Richardson over t, t/2.
        auto cyclic_term = [&](const AnyFunctional& X, const AnyFunctional& Y,
                               const AnyFunctional& Z) {
            const FieldVecPtr dir = direction(Z);
            auto value_at = [&](double t) {
                FieldVecPtr st = perturbed_state(state, t, dir);
                check_state_in_omega(*st, chart.omega, grid, "spot-check perturbed state");
                return bracket(spec, X, Y, st, grid);
            };
            const double t0 = 1e-3;
            auto diff = [&](double t) { return (value_at(t) - value_at(-t)) / (2.0 * t); };
            const double d1 = diff(t0);
            const double d2 = diff(t0 / 2.0);
            return (4.0 * d2 - d1) / 3.0;
        };
        const double cyc =
            cyclic_term(aF, aG, aH) + cyclic_term(aG, aH, aF) + cyclic_term(aH, aF, aG);
        const FieldVecPtr st = state;
        const double bFG = bracket(spec, aF, aG, st, grid);
        const double bGH = bracket(spec, aG, aH, st, grid);
        const double bHF = bracket(spec, aH, aF, st, grid);
        out.residual = std::abs(cyc) / std::max({1.0, std::abs(bFG), std::abs(bGH), std::abs(bHF)});
        out.note = "nonlinear spot check with functional '" + nonlinear.name + "'";
    } catch (const OmegaEscapeError& e) {
        out.residual = std::nullopt;
        out.note = std::string("skipped: perturbed state leaves the chart (") + e.what() + ")";
    }
    return out;
}

}  // namespace wnlpb
