#include "wnlpb/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "wnlpb/rng.hpp"

namespace wnlpb {

namespace {

std::vector<Expr> minor_matrix(const std::vector<Expr>& m, int n, int row, int col) {
    std::vector<Expr> out;
    out.reserve((n - 1) * (n - 1));
    for (int i = 0; i < n; ++i) {
        if (i == row) continue;
        for (int j = 0; j < n; ++j) {
            if (j == col) continue;
            out.push_back(m[i * n + j]);
        }
    }
    return out;
}

}  // namespace

Expr sym_determinant(const std::vector<Expr>& m, int n) {
    if (n == 1) return m[0];
    if (n == 2) return simplify(sub(mul(m[0], m[3]), mul(m[1], m[2])));
    Expr det;
    for (int j = 0; j < n; ++j) {
        Expr cof = mul(m[j], sym_determinant(minor_matrix(m, n, 0, j), n - 1));
        if (j % 2 == 1) cof = neg(cof);
        det = det ? add(det, cof) : cof;
    }
    return simplify(det);
}

std::vector<Expr> covariant_metric(const std::vector<Expr>& g, int n) {
    if (n > 4)
        throw std::invalid_argument("covariant_metric: symbolic inversion supported for n <= 4");
    Expr det = sym_determinant(g, n);
    std::vector<Expr> inv(n * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            // inverse[i][j] = cofactor_{j,i} / det
            Expr cof = n == 1 ? constant(1.0) : sym_determinant(minor_matrix(g, n, j, i), n - 1);
            if ((i + j) % 2 == 1) cof = neg(cof);
            inv[i * n + j] = simplify(divide(cof, det));
        }
    }
    return inv;
}

std::vector<Expr> levi_civita(const std::vector<Expr>& g, int n) {
    const std::vector<Expr> gc = covariant_metric(g, n);

    // d_k g_{ij} = -g_{ia} (d_k g^{ab}) g_{bj}
    std::vector<Expr> dgc(n * n * n);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                Expr acc;
                for (int a = 0; a < n; ++a) {
                    for (int b = 0; b < n; ++b) {
                        Expr dg = d_partial(g[a * n + b], k + 1, 0);
                        if (is_zero(dg)) continue;
                        Expr term = mul(mul(gc[i * n + a], dg), gc[b * n + j]);
                        acc = acc ? add(acc, term) : term;
                    }
                }
                dgc[(k * n + i) * n + j] = acc ? simplify(neg(acc)) : constant(0.0);
            }
        }
    }

    auto dg_cov = [&](int k, int i, int j) { return dgc[(k * n + i) * n + j]; };

    std::vector<Expr> gamma(n * n * n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                Expr acc;
                for (int l = 0; l < n; ++l) {
                    Expr inner = sub(add(dg_cov(b, c, l), dg_cov(c, b, l)), dg_cov(l, b, c));
                    if (is_zero(simplify(inner))) continue;
                    Expr term = mul(g[a * n + l], inner);
                    acc = acc ? add(acc, term) : term;
                }
                gamma[(a * n + b) * n + c] =
                    acc ? simplify(mul(constant(0.5), acc)) : constant(0.0);
            }
        }
    }
    return gamma;
}

std::vector<Expr> riemann(const BracketSpec& spec) {
    const int n = spec.n;
    std::vector<Expr> R(n * n * n * n);
    // inner^j_{spk} = d_k Gamma^j_{sp} - d_p Gamma^j_{sk}
    //               + Gamma^l_{sp} Gamma^j_{lk} - Gamma^l_{sk} Gamma^j_{lp}
    std::vector<Expr> inner(n * n * n * n);
    for (int j = 0; j < n; ++j) {
        for (int s = 0; s < n; ++s) {
            for (int p = 0; p < n; ++p) {
                for (int k = 0; k < n; ++k) {
                    Expr acc = sub(d_partial(spec.gamma_at(j, s, p), k + 1, 0),
                                   d_partial(spec.gamma_at(j, s, k), p + 1, 0));
                    for (int l = 0; l < n; ++l) {
                        acc = add(acc, sub(mul(spec.gamma_at(l, s, p), spec.gamma_at(j, l, k)),
                                           mul(spec.gamma_at(l, s, k), spec.gamma_at(j, l, p))));
                    }
                    inner[((j * n + s) * n + p) * n + k] = simplify(acc);
                }
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int p = 0; p < n; ++p) {
                for (int k = 0; k < n; ++k) {
                    Expr acc;
                    for (int s = 0; s < n; ++s) {
                        const Expr& in = inner[((j * n + s) * n + p) * n + k];
                        if (is_zero(in)) continue;
                        Expr term = mul(spec.g_at(i, s), in);
                        acc = acc ? add(acc, term) : term;
                    }
                    R[((i * n + j) * n + p) * n + k] = acc ? simplify(acc) : constant(0.0);
                }
            }
        }
    }
    return R;
}

GeometryContext::GeometryContext(const BracketSpec& spec) : spec_(spec) {
    const int n = spec.n;
    dg_.resize(n * n * n);
    dw_.resize(n * n * n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                dg_[(k * n + i) * n + j] = d_partial(spec.g_at(i, j), k + 1, 0);
                dw_[(k * n + i) * n + j] = d_partial(spec.w_at(i, j), k + 1, 0);
            }
    riem_ = riemann(spec);
}

GeometryContext::Values GeometryContext::eval_at(std::span<const double> z) const {
    const int n = spec_.n;
    if (static_cast<int>(z.size()) != n)
        throw std::invalid_argument("GeometryContext::eval_at: bad point dimension");
    JetPoint p(0.0, n, 0);
    for (int j = 0; j < n; ++j) p.set(j + 1, 0, z[j]);

    Values v;
    v.n = n;
    v.g.resize(n * n);
    v.gamma.resize(n * n * n);
    v.w.resize(n * n);
    v.dg.resize(n * n * n);
    v.dw.resize(n * n * n);
    v.riem.resize(n * n * n * n);
    for (int i = 0; i < n * n; ++i) v.g[i] = eval(spec_.g[i], p);
    for (int i = 0; i < n * n * n; ++i) v.gamma[i] = eval(spec_.gamma[i], p);
    for (int i = 0; i < n * n; ++i) v.w[i] = eval(spec_.w[i], p);
    for (int i = 0; i < n * n * n; ++i) v.dg[i] = eval(dg_[i], p);
    for (int i = 0; i < n * n * n; ++i) v.dw[i] = eval(dw_[i], p);
    for (int i = 0; i < n * n * n * n; ++i) v.riem[i] = eval(riem_[i], p);

    // determinant (direct expansion; n <= 4 in practice)
    if (n == 1) {
        v.det_g = v.g[0];
    } else if (n == 2) {
        v.det_g = v.g[0] * v.g[3] - v.g[1] * v.g[2];
    } else {
        // Gaussian elimination with partial pivoting
        std::vector<double> a = v.g;
        double det = 1.0;
        for (int col = 0; col < n; ++col) {
            int piv = col;
            for (int r = col + 1; r < n; ++r)
                if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
            if (a[piv * n + col] == 0.0) {
                det = 0.0;
                break;
            }
            if (piv != col) {
                for (int cc = 0; cc < n; ++cc) std::swap(a[piv * n + cc], a[col * n + cc]);
                det = -det;
            }
            det *= a[col * n + col];
            for (int r = col + 1; r < n; ++r) {
                const double f = a[r * n + col] / a[col * n + col];
                for (int cc = col; cc < n; ++cc) a[r * n + cc] -= f * a[col * n + cc];
            }
        }
        v.det_g = det;
    }
    return v;
}

double CoefficientTensors::max_abs(const std::vector<double>& t) const {
    double mx = 0.0;
    for (double x : t) mx = std::max(mx, std::abs(x));
    return mx;
}

CoefficientTensors coefficient_tensors(const GeometryContext& ctx, std::span<const double> z,
                                       std::span<const double> ux) {
    const auto v = ctx.eval_at(z);
    const int n = v.n;
    CoefficientTensors t;
    t.n = n;
    t.a.assign(n * n * n, 0.0);
    t.b.assign(n * n * n * n, 0.0);
    t.c.assign(n * n, 0.0);
    t.d.assign(n * n * n, 0.0);
    t.e.assign(n * n * n, 0.0);
    t.m.assign(n * n, 0.0);

    // Shared bracket X^{ij}_{pk} = g^{vs}(Gam^i_{vp}Gam^j_{sk} - Gam^i_{vk}Gam^j_{sp})
    //                              + R^{ij}_{pk} - w^i_p w^j_k + w^i_k w^j_p
    auto X = [&](int i, int j, int p, int k) {
        double acc = v.R(i, j, p, k) - v.W(i, p) * v.W(j, k) + v.W(i, k) * v.W(j, p);
        for (int vv = 0; vv < n; ++vv)
            for (int s = 0; s < n; ++s)
                acc += v.G(vv, s) *
                       (v.Gam(i, vv, p) * v.Gam(j, s, k) - v.Gam(i, vv, k) * v.Gam(j, s, p));
        return acc;
    };

    // m^{ij} = w^i_p g^{pj} - w^j_p g^{pi}
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int p = 0; p < n; ++p) acc += v.W(i, p) * v.G(p, j) - v.W(j, p) * v.G(p, i);
            t.m[i * n + j] = acc;
        }

    // d^{ijl} = g^{js} Gam^l_{sp} g^{pi} - g^{is} Gam^l_{sp} g^{pj}
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                double acc = 0.0;
                for (int s = 0; s < n; ++s)
                    for (int p = 0; p < n; ++p)
                        acc += v.Gam(l, s, p) * (v.G(j, s) * v.G(p, i) - v.G(i, s) * v.G(p, j));
                t.d[(i * n + j) * n + l] = acc;
            }

    // e^{ij}_k = w^i_p g^{pa} Gam^j_{ak} - (d_p w^j_k - d_k w^j_p) g^{pi}
    //            - g^{is} Gam^j_{sp} w^p_k
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double acc = 0.0;
                for (int p = 0; p < n; ++p) {
                    for (int a = 0; a < n; ++a) acc += v.W(i, p) * v.G(p, a) * v.Gam(j, a, k);
                    acc -= (v.dW(p, j, k) - v.dW(k, j, p)) * v.G(p, i);
                    for (int s = 0; s < n; ++s) acc -= v.G(i, s) * v.Gam(j, s, p) * v.W(p, k);
                }
                t.e[(i * n + j) * n + k] = acc;
            }

    // b^{ijl}_k = X^{jl}_{pk} g^{pi} - g^{is}Gam^j_{sp}g^{pv}Gam^l_{vk}
    //             + g^{is}Gam^l_{sp}g^{pv}Gam^j_{vk}
    // The Gam-g-Gam pair carries the signs the cyclic expansion produces, which
    // are opposite to one display in the source derivation; with these signs
    // the pair cancels the Gam-Gam part of X exactly when the connection is
    // symmetric, so b reduces to the Gauss defect contracted with g.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                for (int k = 0; k < n; ++k) {
                    double acc = 0.0;
                    for (int s = 0; s < n; ++s)
                        for (int p = 0; p < n; ++p)
                            for (int vv = 0; vv < n; ++vv)
                                acc -= v.G(i, s) * v.G(p, vv) *
                                       (v.Gam(j, s, p) * v.Gam(l, vv, k) -
                                        v.Gam(l, s, p) * v.Gam(j, vv, k));
                    for (int p = 0; p < n; ++p) acc += X(j, l, p, k) * v.G(p, i);
                    t.b[((i * n + j) * n + l) * n + k] = acc;
                }

    // a^{ijl} (contracted with u_x) = cyclic sum over (i,j,l) of
    //   X^{ij}_{pk} u_x^k g^{pa} Gam^l_{ab} u_x^b
    auto a_term = [&](int i, int j, int l) {
        double acc = 0.0;
        for (int p = 0; p < n; ++p) {
            double xk = 0.0;
            for (int k = 0; k < n; ++k) xk += X(i, j, p, k) * ux[k];
            double gb = 0.0;
            for (int al = 0; al < n; ++al)
                for (int be = 0; be < n; ++be) gb += v.G(p, al) * v.Gam(l, al, be) * ux[be];
            acc += xk * gb;
        }
        return acc;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                t.a[(i * n + j) * n + l] = a_term(i, j, l) + a_term(j, l, i) + a_term(l, i, j);

    // c^{jl} (contracted with u_x): u_x^k [ (d_p w^j_b - d_b w^j_p) u_x^b g^{pa} Gam^l_{ak}
    //   + X^{jl}_{pb} u_x^b w^p_k - (d_p w^l_b - d_b w^l_p) u_x^b g^{pa} Gam^j_{ak} ]
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) {
                double ck = 0.0;
                for (int p = 0; p < n; ++p) {
                    double curl_j = 0.0, curl_l = 0.0, xb = 0.0;
                    for (int b = 0; b < n; ++b) {
                        curl_j += (v.dW(p, j, b) - v.dW(b, j, p)) * ux[b];
                        curl_l += (v.dW(p, l, b) - v.dW(b, l, p)) * ux[b];
                        xb += X(j, l, p, b) * ux[b];
                    }
                    double ga_l = 0.0, ga_j = 0.0;
                    for (int a = 0; a < n; ++a) {
                        ga_l += v.G(p, a) * v.Gam(l, a, k);
                        ga_j += v.G(p, a) * v.Gam(j, a, k);
                    }
                    ck += curl_j * ga_l + xb * v.W(p, k) - curl_l * ga_j;
                }
                acc += ux[k] * ck;
            }
            t.c[j * n + l] = acc;
        }

    return t;
}

PointResiduals point_residuals(const GeometryContext::Values& v) {
    const int n = v.n;
    PointResiduals r{0, 0, 0, 0, 0, 0};
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                r.gpc1 = std::max(r.gpc1, std::abs(v.Gam(a, b, c) - v.Gam(a, c, b)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int p = 0; p < n; ++p)
                for (int k = 0; k < n; ++k)
                    r.gpc2 = std::max(r.gpc2, std::abs(v.R(i, j, p, k) -
                                                       (v.W(i, p) * v.W(j, k) -
                                                        v.W(i, k) * v.W(j, p))));
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
            double acc = 0.0;
            for (int p = 0; p < n; ++p) acc += v.W(i, p) * v.G(p, l) - v.W(l, p) * v.G(p, i);
            r.gpc3 = std::max(r.gpc3, std::abs(acc));
        }
    // nabla_p w^i_k = d_p w^i_k + Gam^i_{ps} w^s_k - Gam^s_{pk} w^i_s
    auto nabla_w = [&](int p, int i, int k) {
        double acc = v.dW(p, i, k);
        for (int s = 0; s < n; ++s)
            acc += v.Gam(i, p, s) * v.W(s, k) - v.Gam(s, p, k) * v.W(i, s);
        return acc;
    };
    for (int p = 0; p < n; ++p)
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                r.gpc4 = std::max(r.gpc4, std::abs(nabla_w(p, i, k) - nabla_w(k, i, p)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            r.g_symmetry = std::max(r.g_symmetry, std::abs(v.G(i, j) - v.G(j, i)));
    // compatibility: d_k g^{ij} + Gam^i_{sk} g^{sj} + Gam^j_{sk} g^{is} = 0
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = v.dG(k, i, j);
                for (int s = 0; s < n; ++s)
                    acc += v.Gam(i, s, k) * v.G(s, j) + v.Gam(j, s, k) * v.G(i, s);
                r.compatibility = std::max(r.compatibility, std::abs(acc));
            }
    return r;
}

double PointResiduals::max_gpc() const {
    return std::max({gpc1, gpc2, gpc3, gpc4});
}

std::vector<std::vector<double>> sample_points(const Box& box, const Omega& omega,
                                               double delta_omega, int count) {
    const int n = static_cast<int>(box.lo.size());
    static const int primes[] = {2, 3, 5, 7, 11, 13};
    if (n > 6) throw std::invalid_argument("sample_points: n too large");
    auto halton = [&](int index, int base) {
        double f = 1.0, r = 0.0;
        int i = index;
        while (i > 0) {
            f /= base;
            r += f * (i % base);
            i /= base;
        }
        return r;
    };
    std::vector<std::vector<double>> out;
    int index = 1;
    int guard = 0;
    while (static_cast<int>(out.size()) < count && guard < 100000) {
        std::vector<double> z(n);
        for (int j = 0; j < n; ++j)
            z[j] = box.lo[j] + (box.hi[j] - box.lo[j]) * halton(index, primes[j]);
        ++index;
        ++guard;
        if (!omega.constraints.empty() && omega.slack(z) < delta_omega) continue;
        out.push_back(std::move(z));
    }
    if (static_cast<int>(out.size()) < count)
        throw std::runtime_error("sample_points: subchart box rejects too many points");
    return out;
}

GeometryReport gpc_check(const GeometryContext& ctx,
                         const std::vector<std::vector<double>>& samples,
                         const GeometryTolerances& tol, std::uint64_t ux_seed) {
    GeometryReport rep;
    rep.sample_count = static_cast<int>(samples.size());
    rep.g_symmetry.name = "g-symmetry";
    rep.compatibility.name = "metric-compatibility";
    rep.gpc1.name = "GPC:1";
    rep.gpc2.name = "GPC:2";
    rep.gpc3.name = "GPC:3";
    rep.gpc4.name = "GPC:4";
    rep.coeff_a.name = "coeff-a";
    rep.coeff_b.name = "coeff-b";
    rep.coeff_c.name = "coeff-c";
    rep.coeff_d.name = "coeff-d";
    rep.coeff_e.name = "coeff-e";
    rep.coeff_m.name = "coeff-m";
    rep.min_abs_det = std::numeric_limits<double>::infinity();

    SplitMix64 rng(ux_seed);
    auto track = [](ConditionResult& c, double value, const std::vector<double>& z) {
        if (value > c.max_residual) {
            c.max_residual = value;
            c.worst_point = z;
        }
    };

    const int n = ctx.spec().n;
    for (const auto& z : samples) {
        const auto v = ctx.eval_at(z);
        const PointResiduals pr = point_residuals(v);
        track(rep.gpc1, pr.gpc1, z);
        track(rep.gpc2, pr.gpc2, z);
        track(rep.gpc3, pr.gpc3, z);
        track(rep.gpc4, pr.gpc4, z);
        track(rep.g_symmetry, pr.g_symmetry, z);
        track(rep.compatibility, pr.compatibility, z);
        rep.min_abs_det = std::min(rep.min_abs_det, std::abs(v.det_g));

        std::vector<double> ux(n);
        for (int j = 0; j < n; ++j) ux[j] = rng.uniform(-1.0, 1.0);
        const CoefficientTensors ct = coefficient_tensors(ctx, z, ux);
        track(rep.coeff_a, ct.max_abs(ct.a), z);
        track(rep.coeff_b, ct.max_abs(ct.b), z);
        track(rep.coeff_c, ct.max_abs(ct.c), z);
        track(rep.coeff_d, ct.max_abs(ct.d), z);
        track(rep.coeff_e, ct.max_abs(ct.e), z);
        track(rep.coeff_m, ct.max_abs(ct.m), z);
    }

    for (ConditionResult* c : {&rep.gpc1, &rep.gpc2, &rep.gpc3, &rep.gpc4, &rep.g_symmetry,
                               &rep.compatibility})
        c->pass = c->max_residual <= tol.gpc;
    for (ConditionResult* c :
         {&rep.coeff_a, &rep.coeff_b, &rep.coeff_c, &rep.coeff_d, &rep.coeff_e, &rep.coeff_m})
        c->pass = c->max_residual <= tol.coefficients;
    rep.nondegenerate = rep.min_abs_det > tol.nondegeneracy;
    return rep;
}

AuditReport equivalence_audit(const GeometryContext& ctx,
                              const std::vector<std::vector<double>>& samples, double tol_coeff,
                              double tol_gpc) {
    AuditReport rep;
    rep.samples = static_cast<int>(samples.size());
    for (const auto& z : samples) {
        const auto v = ctx.eval_at(z);
        const PointResiduals pr = point_residuals(v);
        std::vector<double> ux(ctx.spec().n, 0.0);  // b,d,e,m are u_x-free
        const CoefficientTensors ct = coefficient_tensors(ctx, z, ux);
        const double coeff_res =
            std::max({ct.max_abs(ct.b), ct.max_abs(ct.d), ct.max_abs(ct.e), ct.max_abs(ct.m)});
        const double gpc_res = pr.max_gpc();
        const bool coeff_ok = coeff_res <= tol_coeff;
        const bool gpc_ok = gpc_res <= tol_gpc;
        if (coeff_ok != gpc_ok) rep.mismatches.push_back({z, coeff_res, gpc_res});
    }
    return rep;
}

}  // namespace wnlpb
