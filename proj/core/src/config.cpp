#include "wnlpb/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wnlpb {

std::string Diagnostic::to_string() const {
    std::string s = severity == Severity::Error ? "error" : "warning";
    if (line > 0) s += " (line " + std::to_string(line) + ")";
    return s + ": " + message;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    for (const Diagnostic& d : diagnostics)
        if (d.severity == Diagnostic::Severity::Error) return true;
    return false;
}

std::string config_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

// Extracts "..." pieces; used for expression lists.
std::vector<std::string> split_quoted(const std::string& s, bool& ok) {
    std::vector<std::string> out;
    ok = true;
    std::size_t i = 0;
    while (i < s.size()) {
        if (std::isspace(static_cast<unsigned char>(s[i]))) {
            ++i;
            continue;
        }
        if (s[i] != '"') {
            ok = false;
            return out;
        }
        std::size_t j = s.find('"', i + 1);
        if (j == std::string::npos) {
            ok = false;
            return out;
        }
        out.push_back(s.substr(i + 1, j - i - 1));
        i = j + 1;
    }
    return out;
}

bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(s, &used);
        return used == s.size();
    } catch (...) {
        return false;
    }
}

bool parse_int(const std::string& s, long long& out) {
    try {
        std::size_t used = 0;
        out = std::stoll(s, &used);
        return used == s.size();
    } catch (...) {
        return false;
    }
}

int field_index_from_name(const std::string& name, int n) {
    if (name == "u") return 1;
    if (name == "v" && n >= 2) return 2;
    if (name == "w" && n >= 3) return 3;
    if (name.size() >= 2 && name[0] == 'u') {
        long long v = 0;
        if (parse_int(name.substr(1), v) && v >= 1 && v <= n) return static_cast<int>(v);
    }
    return -1;
}

// Strips a quoted value if present ("expr" -> expr).
std::string unquote(const std::string& s, bool& ok) {
    ok = true;
    std::string t = trim(s);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') return t.substr(1, t.size() - 2);
    if (t.find('"') != std::string::npos) ok = false;
    return t;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& path,
                            std::vector<Diagnostic>& diags) {
    RunConfig cfg;
    cfg.path = path;
    cfg.raw_text = text;

    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    std::string section;
    std::string section_arg;

    auto err = [&](const std::string& msg) {
        diags.push_back({Diagnostic::Severity::Error, msg, lineno});
    };

    FunctionalConfig* cur_functional = nullptr;
    TestFunctionConfig* cur_testfn = nullptr;

    while (std::getline(is, line)) {
        ++lineno;
        std::string s = line;
        if (std::size_t hash = s.find('#'); hash != std::string::npos) {
            // '#' inside quotes is part of an expression
            bool in_quote = false;
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (s[i] == '"') in_quote = !in_quote;
                if (s[i] == '#' && !in_quote) {
                    s = s.substr(0, i);
                    break;
                }
            }
        }
        s = trim(s);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']') {
                err("malformed section header");
                continue;
            }
            std::string inner = trim(s.substr(1, s.size() - 2));
            std::size_t sp = inner.find(' ');
            section = sp == std::string::npos ? inner : inner.substr(0, sp);
            section_arg = sp == std::string::npos ? "" : trim(inner.substr(sp + 1));
            cur_functional = nullptr;
            cur_testfn = nullptr;
            if (section == "functional") {
                if (section_arg.empty()) {
                    err("functional section needs a name: [functional NAME]");
                } else {
                    cfg.functionals.push_back(FunctionalConfig{section_arg, "", lineno, {}});
                    cur_functional = &cfg.functionals.back();
                }
            } else if (section == "testfunction") {
                if (section_arg.empty()) {
                    err("testfunction section needs a name: [testfunction NAME]");
                } else {
                    cfg.test_functions.push_back(TestFunctionConfig{section_arg, {}, lineno});
                    cur_testfn = &cfg.test_functions.back();
                }
            } else if (section != "chart" && section != "grid" && section != "bracket" &&
                       section != "run" && section != "tolerances") {
                err("unknown section [" + section + "]");
            }
            continue;
        }

        std::size_t eq = s.find('=');
        if (eq == std::string::npos) {
            err("expected key = value");
            continue;
        }
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));

        if (section == "chart") {
            if (key == "n") {
                long long v;
                if (parse_int(value, v) && v >= 1)
                    cfg.n = static_cast<int>(v);
                else
                    err("n must be a positive integer");
            } else if (key == "omega") {
                cfg.omega_lines.push_back({value, lineno});
            } else if (key == "box") {
                auto toks = split_ws(value);
                double lo, hi;
                if (toks.size() != 3 || !parse_double(toks[1], lo) || !parse_double(toks[2], hi) ||
                    !(lo < hi)) {
                    err("box expects: box = <field> <lo> <hi>");
                } else {
                    if (!cfg.subchart_set) {
                        cfg.subchart.lo.assign(std::max(cfg.n, 1), -1.0);
                        cfg.subchart.hi.assign(std::max(cfg.n, 1), 1.0);
                        cfg.subchart_set = true;
                    }
                    int f = field_index_from_name(toks[0], cfg.n);
                    if (f < 1) {
                        err("box field '" + toks[0] + "' is not a valid field name");
                    } else {
                        if (static_cast<int>(cfg.subchart.lo.size()) < cfg.n) {
                            cfg.subchart.lo.resize(cfg.n, -1.0);
                            cfg.subchart.hi.resize(cfg.n, 1.0);
                        }
                        cfg.subchart.lo[f - 1] = lo;
                        cfg.subchart.hi[f - 1] = hi;
                    }
                }
            } else if (key == "delta_omega") {
                double v;
                if (parse_double(value, v) && v >= 0)
                    cfg.delta_omega = v;
                else
                    err("delta_omega must be a nonnegative number");
            } else {
                err("unknown key '" + key + "' in [chart]");
            }
        } else if (section == "grid") {
            if (key == "L") {
                double v;
                if (parse_double(value, v) && v > 0)
                    cfg.grid.L = v;
                else
                    err("L must be positive");
            } else if (key == "m") {
                long long v;
                if (parse_int(value, v) && v >= 5)
                    cfg.grid.m = static_cast<int>(v);
                else
                    err("m must be an integer >= 5");
            } else if (key == "eps_tail") {
                double v;
                if (parse_double(value, v) && v > 0)
                    cfg.eps_tail = v;
                else
                    err("eps_tail must be positive");
            } else {
                err("unknown key '" + key + "' in [grid]");
            }
        } else if (section == "bracket") {
            bool ok = true;
            std::string expr = unquote(value, ok);
            if (!ok) {
                err("tensor entries must be single quoted expressions");
                continue;
            }
            bool valid_key = key.size() >= 3;
            if (valid_key) {
                const std::string head = key.substr(0, key.find_first_of("0123456789"));
                valid_key = head == "g" || head == "w" || head == "gamma";
            }
            if (!valid_key) {
                err("unknown key '" + key + "' in [bracket]");
            } else {
                cfg.tensor_entries[key] = {expr, lineno};
                if (key.rfind("gamma", 0) == 0) cfg.gamma_supplied = true;
            }
        } else if (section == "functional") {
            if (!cur_functional) {
                err("key outside a named functional section");
            } else if (key == "outer") {
                bool ok = true;
                cur_functional->outer_src = unquote(value, ok);
                cur_functional->outer_line = lineno;
                if (!ok) err("outer must be a quoted expression");
            } else if (key == "chain") {
                bool ok = true;
                auto exprs = split_quoted(value, ok);
                if (!ok || exprs.empty())
                    err("chain expects quoted expressions, outermost first");
                else
                    cur_functional->chains.push_back({exprs, lineno});
            } else {
                err("unknown key '" + key + "' in [functional]");
            }
        } else if (section == "testfunction") {
            if (!cur_testfn) {
                err("key outside a named testfunction section");
            } else if (key == "term") {
                auto toks = split_ws(value);
                if (toks.size() < 4) {
                    err("term expects: term = <field> <a> <c> <poly coeffs...>");
                } else {
                    TestFunctionTerm t;
                    int f = field_index_from_name(toks[0], cfg.n);
                    double a, c;
                    bool ok = f >= 1 && parse_double(toks[1], a) && parse_double(toks[2], c);
                    t.field = f;
                    t.a = a;
                    t.c = c;
                    for (std::size_t i = 3; i < toks.size() && ok; ++i) {
                        double coeff;
                        ok = parse_double(toks[i], coeff);
                        t.poly.push_back(coeff);
                    }
                    if (!ok || !(t.a > 0))
                        err("malformed term; expected field, a > 0, c, coefficients");
                    else
                        cur_testfn->terms.push_back(std::move(t));
                }
            } else {
                err("unknown key '" + key + "' in [testfunction]");
            }
        } else if (section == "run") {
            long long v;
            if (key == "seed") {
                if (parse_int(value, v) && v >= 0) {
                    cfg.seed = static_cast<std::uint64_t>(v);
                    cfg.seed_set = true;
                } else {
                    err("seed must be a nonnegative integer");
                }
            } else if (key == "trials") {
                if (parse_int(value, v) && v >= 1)
                    cfg.trials = static_cast<int>(v);
                else
                    err("trials must be >= 1");
            } else if (key == "samples") {
                if (parse_int(value, v) && v >= 1)
                    cfg.samples = static_cast<int>(v);
                else
                    err("samples must be >= 1");
            } else if (key == "max_chain_depth") {
                if (parse_int(value, v) && v >= 1)
                    cfg.max_chain_depth = static_cast<int>(v);
                else
                    err("max_chain_depth must be >= 1");
            } else if (key == "max_chains") {
                if (parse_int(value, v) && v >= 0)
                    cfg.max_chains = static_cast<int>(v);
                else
                    err("max_chains must be >= 0");
            } else {
                err("unknown key '" + key + "' in [run]");
            }
        } else if (section == "tolerances") {
            double v;
            if (!parse_double(value, v) || !(v > 0)) {
                err("tolerance '" + key + "' must be positive");
            } else if (key == "geometry") {
                cfg.tol.geometry = v;
            } else if (key == "coefficients") {
                cfg.tol.coefficients = v;
            } else if (key == "skew") {
                cfg.tol.skew = v;
            } else if (key == "jacobi") {
                cfg.tol.jacobi = v;
            } else if (key == "vd_oracle") {
                cfg.tol.vd_oracle = v;
            } else if (key == "gateaux") {
                cfg.tol.gateaux = v;
            } else if (key == "gateaux_wnl") {
                cfg.tol.gateaux_wnl = v;
            } else if (key == "gamma_divergence") {
                cfg.tol.gamma_divergence = v;
            } else {
                err("unknown tolerance '" + key + "'");
            }
        } else {
            err("key before any section header");
        }
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path, std::vector<Diagnostic>& diags) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        diags.push_back({Diagnostic::Severity::Error, "cannot open config file: " + path, 0});
        return RunConfig{};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path, diags);
}

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

namespace {

// Parses an affine constraint "u1 - u2 > 0" by evaluating the left-hand side
// at the origin and the unit points; a residual check rejects non-affine input.
bool compile_omega_line(const std::string& src, int n, HalfSpace& out, std::string& why) {
    std::size_t gt = src.find('>');
    if (gt == std::string::npos) {
        why = "expected '<lin expr> > <number>'";
        return false;
    }
    const std::string lhs = trim(src.substr(0, gt));
    const std::string rhs = trim(src.substr(gt + 1));
    double offset;
    if (!parse_double(rhs, offset)) {
        why = "right-hand side must be a number";
        return false;
    }
    Expr e;
    try {
        e = parse(lhs, n);
    } catch (const std::exception& ex) {
        why = ex.what();
        return false;
    }
    if (max_jet_order(e) > 0 || depends_on_x(e)) {
        why = "constraint must depend on field values only";
        return false;
    }
    auto eval_at = [&](const std::vector<double>& z) {
        JetPoint p(0.0, n, 0);
        for (int j = 0; j < n; ++j) p.set(j + 1, 0, z[j]);
        return eval(e, p);
    };
    std::vector<double> z(n, 0.0);
    const double c0 = eval_at(z);
    out.coeff.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        z.assign(n, 0.0);
        z[j] = 1.0;
        out.coeff[j] = eval_at(z) - c0;
    }
    // affine check at a probe point
    z.assign(n, 0.0);
    for (int j = 0; j < n; ++j) z[j] = 0.37 + 0.21 * j;
    double lin = c0;
    for (int j = 0; j < n; ++j) lin += out.coeff[j] * z[j];
    if (std::abs(eval_at(z) - lin) > 1e-9) {
        why = "constraint is not affine in the fields";
        return false;
    }
    out.offset = offset - c0;
    out.label = src;
    return true;
}

Expr parse_entry(const std::string& key, const std::string& src, int line, int n,
                 std::vector<Diagnostic>& diags, bool& ok) {
    try {
        Expr e = simplify(parse(src, n));
        if (max_jet_order(e) > 0)
            diags.push_back({Diagnostic::Severity::Error,
                             key + " must be hydrodynamic (depend on u only, no jets): '" + src +
                                 "'",
                             line});
        else if (depends_on_x(e))
            diags.push_back({Diagnostic::Severity::Error,
                             key + " must not depend explicitly on x: '" + src + "'", line});
        else
            return e;
    } catch (const std::exception& ex) {
        diags.push_back({Diagnostic::Severity::Error,
                         key + ": " + std::string(ex.what()) + " in '" + src + "'", line});
    }
    ok = false;
    return constant(0.0);
}

}  // namespace

const Functional* CompiledConfig::find_functional(const std::string& name) const {
    for (const auto& [n, f] : functionals)
        if (n == name) return &f;
    return nullptr;
}

const TestFunction* CompiledConfig::find_test_function(const std::string& name) const {
    for (const auto& [n, f] : test_functions)
        if (n == name) return &f;
    return nullptr;
}

std::optional<CompiledConfig> compile_config(const RunConfig& cfg,
                                             std::vector<Diagnostic>& diags) {
    auto err = [&](const std::string& msg, int line = 0) {
        diags.push_back({Diagnostic::Severity::Error, msg, line});
    };
    auto warn = [&](const std::string& msg, int line = 0) {
        diags.push_back({Diagnostic::Severity::Warning, msg, line});
    };

    const int n = cfg.n;
    if (n < 1 || n > 4) {
        err("field count n must be in 1..4 (symbolic metric inversion)");
        return std::nullopt;
    }
    if (cfg.grid.m % 2 == 0)
        err("grid m must be odd (symmetric node at x = 0, Richardson comparison)");

    CompiledConfig out;
    out.raw = cfg;
    out.grid = cfg.grid;
    out.chart.n = n;
    out.chart.delta_omega = cfg.delta_omega;

    for (const auto& [src, line] : cfg.omega_lines) {
        HalfSpace hs;
        std::string why;
        if (!compile_omega_line(src, n, hs, why))
            err("omega constraint '" + src + "': " + why, line);
        else
            out.chart.omega.constraints.push_back(std::move(hs));
    }
    out.chart.omega.n = n;
    if (!out.chart.omega.origin_admissible())
        err("Omega must not exclude the origin: Schwartz states decay to 0");

    if (cfg.subchart_set) {
        out.chart.subchart = cfg.subchart;
        if (static_cast<int>(out.chart.subchart.lo.size()) != n) {
            out.chart.subchart.lo.resize(n, -1.0);
            out.chart.subchart.hi.resize(n, 1.0);
        }
    } else {
        out.chart.subchart.lo.assign(n, -1.0);
        out.chart.subchart.hi.assign(n, 1.0);
    }

    // Bracket tensors
    out.spec.n = n;
    out.spec.name = cfg.path;
    out.spec.g.assign(n * n, constant(0.0));
    out.spec.w.assign(n * n, constant(0.0));
    out.spec.gamma.assign(n * n * n, constant(0.0));
    bool tensors_ok = true;
    bool any_g = false;
    for (const auto& [key, entry] : cfg.tensor_entries) {
        const auto& [src, line] = entry;
        auto digits_at = [&](std::size_t pos, int count) -> std::vector<int> {
            std::vector<int> idx;
            if (key.size() != pos + count) return idx;
            for (int i = 0; i < count; ++i) {
                char c = key[pos + i];
                if (c < '1' || c > '0' + n) return {};
                idx.push_back(c - '1');
            }
            return idx;
        };
        if (key[0] == 'g' && key.rfind("gamma", 0) != 0) {
            auto idx = digits_at(1, 2);
            if (idx.size() != 2) {
                err("bad tensor key '" + key + "' (expected g<i><j> with indices in 1.." +
                        std::to_string(n) + ")",
                    line);
                continue;
            }
            out.spec.g[idx[0] * n + idx[1]] = parse_entry(key, src, line, n, diags, tensors_ok);
            any_g = true;
        } else if (key[0] == 'w') {
            auto idx = digits_at(1, 2);
            if (idx.size() != 2) {
                err("bad tensor key '" + key + "'", line);
                continue;
            }
            out.spec.w[idx[0] * n + idx[1]] = parse_entry(key, src, line, n, diags, tensors_ok);
        } else {  // gamma
            auto idx = digits_at(5, 3);
            if (idx.size() != 3) {
                err("bad tensor key '" + key + "' (expected gamma<a><b><c>)", line);
                continue;
            }
            out.spec.gamma[(idx[0] * n + idx[1]) * n + idx[2]] =
                parse_entry(key, src, line, n, diags, tensors_ok);
        }
    }
    if (!any_g) err("no metric entries g<i><j> given in [bracket]");
    if (!tensors_ok || !any_g) return std::nullopt;

    // Structural g-symmetry (numeric check happens on samples below).
    // Derived Levi-Civita when gamma is absent.
    std::vector<std::vector<double>> samples;
    try {
        samples = sample_points(out.chart.subchart, out.chart.omega, cfg.delta_omega,
                                std::max(8, cfg.samples));
    } catch (const std::exception& ex) {
        err(std::string("subchart sampling failed: ") + ex.what());
        return std::nullopt;
    }
    {
        // probe the box center and corners too: degeneracies that sit on a
        // symmetry line (like u = v) otherwise dodge the low-discrepancy set
        std::vector<double> center(n);
        for (int j = 0; j < n; ++j)
            center[j] = 0.5 * (out.chart.subchart.lo[j] + out.chart.subchart.hi[j]);
        std::vector<std::vector<double>> probes{center};
        if (n <= 3) {
            for (int mask = 0; mask < (1 << n); ++mask) {
                std::vector<double> corner(n);
                for (int j = 0; j < n; ++j)
                    corner[j] = (mask >> j) & 1 ? out.chart.subchart.hi[j]
                                                : out.chart.subchart.lo[j];
                probes.push_back(std::move(corner));
            }
        }
        for (auto& z : probes)
            if (out.chart.omega.constraints.empty() || out.chart.omega.contains(z))
                samples.push_back(std::move(z));
    }

    // Numeric admissibility of tensor entries on the subchart
    {
        JetPoint p(0.0, n, 0);
        double min_det = std::numeric_limits<double>::infinity();
        double max_asym = 0.0;
        for (const auto& z : samples) {
            for (int j = 0; j < n; ++j) p.set(j + 1, 0, z[j]);
            try {
                std::vector<double> gval(n * n);
                for (int i = 0; i < n * n; ++i) gval[i] = eval(out.spec.g[i], p);
                for (int i = 0; i < n * n * n; ++i) (void)eval(out.spec.gamma[i], p);
                for (int i = 0; i < n * n; ++i) (void)eval(out.spec.w[i], p);
                double det;
                if (n == 1)
                    det = gval[0];
                else if (n == 2)
                    det = gval[0] * gval[3] - gval[1] * gval[2];
                else {
                    GeometryContext tmp_ctx(out.spec);
                    det = tmp_ctx.eval_at(z).det_g;
                }
                min_det = std::min(min_det, std::abs(det));
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        max_asym = std::max(max_asym, std::abs(gval[i * n + j] - gval[j * n + i]));
            } catch (const EvalError& ex) {
                err(std::string("tensor entry inadmissible on subchart at z = (") +
                    [&] {
                        std::string s;
                        for (int j = 0; j < n; ++j) s += (j ? ", " : "") + std::to_string(z[j]);
                        return s;
                    }() + "): " + ex.what());
                return std::nullopt;
            }
        }
        if (!(min_det > 1e-12))
            err("metric singular at sampled point on the subchart (min |det g| = " +
                std::to_string(min_det) + "); shrink the subchart or fix g");
        if (max_asym > 1e-12)
            err("metric entries are not symmetric: max |g^{ij} - g^{ji}| = " +
                std::to_string(max_asym) + " (pseudometric requires g symmetric)");
    }

    if (!cfg.gamma_supplied) {
        try {
            out.spec.gamma = levi_civita(out.spec.g, n);
            out.spec.gamma_derived = true;
        } catch (const std::exception& ex) {
            err(std::string("Levi-Civita derivation failed: ") + ex.what());
            return std::nullopt;
        }
    }

    // Functionals
    for (const FunctionalConfig& fc : cfg.functionals) {
        if (fc.outer_src.empty()) {
            err("functional '" + fc.name + "' has no outer density", fc.outer_line);
            continue;
        }
        try {
            LocalDensity outer(parse(fc.outer_src, n), n);
            std::vector<std::vector<LocalDensity>> chains;
            for (const auto& [srcs, line] : fc.chains) {
                if (static_cast<int>(srcs.size()) > cfg.max_chain_depth) {
                    err("functional '" + fc.name + "': chain depth " +
                            std::to_string(srcs.size()) + " exceeds max_chain_depth = " +
                            std::to_string(cfg.max_chain_depth),
                        line);
                    throw ConfigError("chain too deep");
                }
                std::vector<LocalDensity> chain;
                for (const std::string& src : srcs) chain.push_back(LocalDensity(parse(src, n), n));
                chains.push_back(std::move(chain));
            }
            if (static_cast<int>(chains.size()) > cfg.max_chains) {
                err("functional '" + fc.name + "': " + std::to_string(chains.size()) +
                        " chains exceed max_chains = " + std::to_string(cfg.max_chains),
                    fc.outer_line);
                continue;
            }
            out.functionals.push_back(
                {fc.name, Functional(fc.name, WNLChain(std::move(outer), std::move(chains)))});
        } catch (const ConfigError&) {
            // diagnostics already recorded
        } catch (const std::exception& ex) {
            err("functional '" + fc.name + "': " + ex.what(), fc.outer_line);
        }
    }

    // Test functions
    for (const TestFunctionConfig& tc : cfg.test_functions) {
        try {
            TestFunction tf = make_test_function(n, tc.terms, out.chart.omega, cfg.delta_omega,
                                                 out.grid, 6, cfg.eps_tail);
            out.test_functions.push_back({tc.name, std::move(tf)});
        } catch (const std::exception& ex) {
            err("testfunction '" + tc.name + "': " + ex.what(), tc.line);
        }
    }

    if (cfg.grid.L < 8) warn("grid half-width L < 8 leaves little room for Schwartz tails");

    if (has_errors(diags)) return std::nullopt;
    return out;
}

}  // namespace wnlpb
