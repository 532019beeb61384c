// wnlpb - verification engine for weakly nonlocal Poisson brackets of
// hydrodynamic type. Subcommands run the check suites described in the README
// and write a machine-readable JSON report.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wnlpb/config.hpp"
#include "wnlpb/engine.hpp"
#include "wnlpb/json_writer.hpp"

namespace {

using namespace wnlpb;

constexpr const char* kVersion = "0.1.0";

std::string iso_timestamp() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

struct CliOptions {
    std::string config_path;
    std::string out_path;
    std::string functional;
    std::string at;
    std::string bracket_f, bracket_g;
    bool seed_override = false;
    std::uint64_t seed = 0;
    int trials = -1;
    int samples = -1;
    double grid_L = -1;
    int grid_m = -1;
    double tol_geometry = -1, tol_skew = -1, tol_jacobi = -1;
};

void apply_overrides(RunConfig& cfg, const CliOptions& opt) {
    if (opt.seed_override) {
        cfg.seed = opt.seed;
        cfg.seed_set = true;
    }
    if (opt.trials > 0) cfg.trials = opt.trials;
    if (opt.samples > 0) cfg.samples = opt.samples;
    if (opt.grid_L > 0) cfg.grid.L = opt.grid_L;
    if (opt.grid_m > 0) cfg.grid.m = opt.grid_m;
    if (opt.tol_geometry > 0) {
        cfg.tol.geometry = opt.tol_geometry;
        cfg.tol.coefficients = opt.tol_geometry;
    }
    if (opt.tol_skew > 0) cfg.tol.skew = opt.tol_skew;
    if (opt.tol_jacobi > 0) cfg.tol.jacobi = opt.tol_jacobi;
}

void emit_config_echo(JsonWriter& w, const CompiledConfig& cc) {
    const RunConfig& cfg = cc.raw;
    w.key("config").begin_object();
    w.key("path").value(cfg.path);
    w.key("hash").value(config_hash(cfg.raw_text));
    w.key("echo").begin_object();
    w.key("n").value(cfg.n);
    w.key("grid").begin_object();
    w.key("L").value(cfg.grid.L);
    w.key("m").value(cfg.grid.m);
    w.key("eps_tail").value(cfg.eps_tail);
    w.end_object();
    w.key("delta_omega").value(cfg.delta_omega);
    w.key("seed").value(cfg.seed);
    w.key("trials").value(cfg.trials);
    w.key("samples").value(cfg.samples);
    w.key("omega").begin_array();
    for (const HalfSpace& hs : cc.chart.omega.constraints) w.value(hs.label);
    w.end_array();
    w.key("subchart").begin_object();
    w.key("lo").begin_array();
    for (double v : cc.chart.subchart.lo) w.value(v);
    w.end_array();
    w.key("hi").begin_array();
    for (double v : cc.chart.subchart.hi) w.value(v);
    w.end_array();
    w.end_object();
    w.key("g").begin_array();
    for (const Expr& e : cc.spec.g) w.value(to_string(e));
    w.end_array();
    w.key("gamma_provenance").value(cc.spec.gamma_derived ? "derived: levi-civita"
                                                          : "user-supplied");
    w.key("gamma").begin_array();
    for (const Expr& e : cc.spec.gamma) w.value(to_string(e));
    w.end_array();
    w.key("w").begin_array();
    for (const Expr& e : cc.spec.w) w.value(to_string(e));
    w.end_array();
    w.key("functionals").begin_array();
    for (const auto& [name, f] : cc.functionals) {
        w.begin_object();
        w.key("name").value(name);
        for (const auto& [coeff, chain] : f.terms) {
            w.key("outer").value(to_string(chain.outer.phi));
            w.key("chains").begin_array();
            for (const auto& ch : chain.chains) {
                w.begin_array();
                for (const LocalDensity& h : ch) w.value(to_string(h.phi));
                w.end_array();
            }
            w.end_array();
        }
        w.end_object();
    }
    w.end_array();
    w.key("test_functions").begin_array();
    for (const auto& [name, tf] : cc.test_functions) w.value(name);
    w.end_array();
    w.key("tolerances").begin_object();
    w.key("geometry").value(cfg.tol.geometry);
    w.key("coefficients").value(cfg.tol.coefficients);
    w.key("skew").value(cfg.tol.skew);
    w.key("jacobi").value(cfg.tol.jacobi);
    w.key("vd_oracle").value(cfg.tol.vd_oracle);
    w.key("gateaux").value(cfg.tol.gateaux);
    w.key("gateaux_wnl").value(cfg.tol.gateaux_wnl);
    w.key("gamma_divergence").value(cfg.tol.gamma_divergence);
    w.end_object();
    w.end_object();
    w.end_object();
}

void emit_condition(JsonWriter& w, const ConditionResult& c) {
    w.begin_object();
    w.key("name").value(c.name);
    w.key("max_residual").value(c.max_residual);
    w.key("pass").value(c.pass);
    w.key("worst_point").begin_array();
    for (double v : c.worst_point) w.value(v);
    w.end_array();
    w.end_object();
}

void emit_geometry_suite(JsonWriter& w, const GeometrySuite& s) {
    w.key("geometry").begin_object();
    w.key("samples").value(s.report.sample_count);
    w.key("conditions").begin_array();
    emit_condition(w, s.report.g_symmetry);
    emit_condition(w, s.report.compatibility);
    emit_condition(w, s.report.gpc1);
    emit_condition(w, s.report.gpc2);
    emit_condition(w, s.report.gpc3);
    emit_condition(w, s.report.gpc4);
    w.end_array();
    w.key("coefficients").begin_array();
    emit_condition(w, s.report.coeff_a);
    emit_condition(w, s.report.coeff_b);
    emit_condition(w, s.report.coeff_c);
    emit_condition(w, s.report.coeff_d);
    emit_condition(w, s.report.coeff_e);
    emit_condition(w, s.report.coeff_m);
    w.end_array();
    w.key("min_abs_det").value(s.report.min_abs_det);
    w.key("nondegenerate").value(s.report.nondegenerate);
    if (s.gamma_divergence) {
        w.key("gamma_divergence").value(*s.gamma_divergence);
        w.key("gamma_divergence_pass").value(s.gamma_divergence_pass);
    }
    w.key("pass").value(s.pass);
    w.end_object();
}

void emit_skew_suite(JsonWriter& w, const SkewSuite& s, const RunConfig& cfg) {
    w.key("skew").begin_object();
    w.key("trials").value(cfg.trials);
    w.key("seed").value(s.residual.seed);
    w.key("residual").value(s.residual.value);
    w.key("worst_trial").value(s.residual.worst_trial);
    w.key("tolerance").value(s.residual.tolerance);
    w.key("preconditions").begin_object();
    w.key("ok").value(s.preconditions.ok);
    w.key("g_symmetry_residual").value(s.preconditions.g_symmetry_residual);
    w.key("compatibility_residual").value(s.preconditions.compatibility_residual);
    w.key("min_abs_det").value(s.preconditions.min_abs_det);
    if (!s.preconditions.ok) w.key("reason").value(s.preconditions.reason);
    w.end_object();
    w.key("pass").value(s.pass);
    w.end_object();
}

void emit_jacobi_suite(JsonWriter& w, const JacobiSuite& s, const RunConfig& cfg) {
    w.key("jacobi").begin_object();
    if (s.skipped) {
        w.key("skipped").value(true);
        w.key("skip_reason").value(s.skip_reason);
    } else {
        w.key("skipped").value(false);
        w.key("trials").value(cfg.trials);
        w.key("seed").value(s.residual.seed);
        w.key("residual").value(s.residual.value);
        w.key("worst_trial").value(s.residual.worst_trial);
        w.key("tolerance").value(s.residual.tolerance);
        w.key("spot_check").begin_object();
        if (s.spot.residual)
            w.key("residual").value(*s.spot.residual);
        else
            w.key("residual").null_value();
        w.key("note").value(s.spot.note);
        w.end_object();
    }
    w.key("pass").value(s.pass);
    w.end_object();
}

void emit_assumptions(JsonWriter& w) {
    w.key("assumptions").begin_array();
    w.value(
        "density boundedness and Omega-admissibility are checked empirically on the sampled "
        "domain, not proven");
    w.value("integrals over R are truncated at [-L, L] with certified Schwartz tails below "
            "eps_tail");
    w.end_array();
}

int write_report(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write report to " << out_path << "\n";
        return 2;
    }
    out << text << "\n";
    return 0;
}

struct TimingBlock {
    std::vector<std::pair<std::string, double>> wall_ms;
};

void emit_header(JsonWriter& w, const std::string& command) {
    w.key("tool").value("wnlpb");
    w.key("version").value(kVersion);
    w.key("command").value(command);
}

void emit_timing(JsonWriter& w, const TimingBlock& t) {
    w.key("timing").begin_object();
    w.key("timestamp").value(iso_timestamp());
    w.key("wall_ms").begin_object();
    for (const auto& [k, v] : t.wall_ms) w.key(k).value(v);
    w.end_object();
    w.end_object();
}

int require_seed(const CompiledConfig& cc) {
    if (!cc.raw.seed_set) {
        std::cerr << "error: this command runs randomized suites; set seed in [run] or pass "
                     "--seed\n";
        return 2;
    }
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_validate(const CompiledConfig* cc, const std::vector<Diagnostic>& diags,
                 const CliOptions& opt) {
    JsonWriter w;
    w.begin_object();
    emit_header(w, "validate");
    if (cc) emit_config_echo(w, *cc);
    w.key("diagnostics").begin_array();
    for (const Diagnostic& d : diags) w.value(d.to_string());
    w.end_array();
    w.key("ok").value(!has_errors(diags) && cc != nullptr);
    w.end_object();
    const int rc = write_report(opt.out_path, w.str());
    if (rc) return rc;
    return has_errors(diags) || !cc ? 2 : 0;
}

int cmd_classify(const CompiledConfig& cc, const CliOptions& opt) {
    if (int rc = require_seed(cc)) return rc;
    Engine engine(cc);
    const ClassifyResult r = engine.classify();

    JsonWriter w;
    w.begin_object();
    emit_header(w, "classify");
    emit_config_echo(w, cc);
    emit_assumptions(w);
    w.key("suites").begin_object();
    emit_geometry_suite(w, r.geometry);
    emit_skew_suite(w, r.skew, cc.raw);
    emit_jacobi_suite(w, r.jacobi, cc.raw);
    w.end_object();
    w.key("verdict").begin_object();
    w.key("poisson").value(r.verdict.poisson);
    w.key("reasons").begin_array();
    for (const std::string& s : r.verdict.reasons) w.value(s);
    w.end_array();
    w.end_object();
    TimingBlock t;
    t.wall_ms = {{"geometry", r.geometry.wall_ms},
                 {"skew", r.skew.wall_ms},
                 {"jacobi", r.jacobi.wall_ms}};
    emit_timing(w, t);
    w.end_object();

    if (int rc = write_report(opt.out_path, w.str())) return rc;
    std::cerr << "classify: Poisson: " << r.verdict.poisson << "\n";
    return r.verdict.poisson == "yes" ? 0 : 1;
}

int cmd_geometry(const CompiledConfig& cc, const CliOptions& opt) {
    if (int rc = require_seed(cc)) return rc;
    Engine engine(cc);
    const GeometrySuite s = engine.run_geometry();
    JsonWriter w;
    w.begin_object();
    emit_header(w, "geometry-check");
    emit_config_echo(w, cc);
    w.key("suites").begin_object();
    emit_geometry_suite(w, s);
    w.end_object();
    TimingBlock t;
    t.wall_ms = {{"geometry", s.wall_ms}};
    emit_timing(w, t);
    w.end_object();
    if (int rc = write_report(opt.out_path, w.str())) return rc;
    return s.pass && s.gamma_divergence_pass ? 0 : 1;
}

int cmd_skew(const CompiledConfig& cc, const CliOptions& opt) {
    if (int rc = require_seed(cc)) return rc;
    Engine engine(cc);
    const SkewSuite s = engine.run_skew();
    JsonWriter w;
    w.begin_object();
    emit_header(w, "skew");
    emit_config_echo(w, cc);
    w.key("suites").begin_object();
    emit_skew_suite(w, s, cc.raw);
    w.end_object();
    TimingBlock t;
    t.wall_ms = {{"skew", s.wall_ms}};
    emit_timing(w, t);
    w.end_object();
    if (int rc = write_report(opt.out_path, w.str())) return rc;
    return s.pass ? 0 : 1;
}

int cmd_jacobi(const CompiledConfig& cc, const CliOptions& opt) {
    if (int rc = require_seed(cc)) return rc;
    Engine engine(cc);
    const SkewSuite skew = engine.run_skew();
    const bool skew_ok = skew.preconditions.ok && skew.pass;
    const JacobiSuite s = engine.run_jacobi(
        skew_ok, skew.preconditions.ok ? "skew residual above tolerance"
                                       : skew.preconditions.reason);
    JsonWriter w;
    w.begin_object();
    emit_header(w, "jacobi");
    emit_config_echo(w, cc);
    w.key("suites").begin_object();
    emit_skew_suite(w, skew, cc.raw);
    emit_jacobi_suite(w, s, cc.raw);
    w.end_object();
    TimingBlock t;
    t.wall_ms = {{"skew", skew.wall_ms}, {"jacobi", s.wall_ms}};
    emit_timing(w, t);
    w.end_object();
    if (int rc = write_report(opt.out_path, w.str())) return rc;
    return s.pass ? 0 : 1;
}

int cmd_gateaux(const CompiledConfig& cc, const CliOptions& opt) {
    if (int rc = require_seed(cc)) return rc;
    if (!opt.functional.empty() && !cc.find_functional(opt.functional)) {
        std::cerr << "error: unknown functional '" << opt.functional << "'\n";
        return 2;
    }
    Engine engine(cc);
    const auto audits = engine.run_gateaux(opt.functional);
    bool all_pass = true;
    JsonWriter w;
    w.begin_object();
    emit_header(w, "gateaux-check");
    emit_config_echo(w, cc);
    w.key("audits").begin_array();
    for (const GateauxAudit& a : audits) {
        all_pass = all_pass && a.pass;
        w.begin_object();
        w.key("functional").value(a.functional);
        w.key("wnl").value(a.is_wnl);
        w.key("trials").value(a.trials);
        w.key("max_deviation").value(a.max_deviation);
        w.key("bound").value(a.bound);
        w.key("max_vd_sup").value(a.max_vd_sup);
        w.key("pass").value(a.pass);
        w.end_object();
    }
    w.end_array();
    w.key("pass").value(all_pass);
    w.end_object();
    if (int rc = write_report(opt.out_path, w.str())) return rc;
    return all_pass ? 0 : 1;
}

int cmd_vd(const CompiledConfig& cc, const CliOptions& opt) {
    const Functional* f = cc.find_functional(opt.functional);
    if (!f) {
        std::cerr << "error: unknown functional '" << opt.functional << "'\n";
        return 2;
    }
    const TestFunction* tf = cc.find_test_function(opt.at);
    if (!tf) {
        std::cerr << "error: unknown test function '" << opt.at << "'\n";
        return 2;
    }
    const FieldVecPtr u = state_from(*tf);
    const auto vd = variational_derivative(*f, u);
    const SampledFunction s =
        materialize(vd, cc.grid, true, "vd of " + opt.functional + " at " + opt.at);
    const BoundednessResult bound = boundedness_check(*f, u, cc.grid);

    JsonWriter w;
    w.begin_object();
    emit_header(w, "vd");
    emit_config_echo(w, cc);
    w.key("functional").value(opt.functional);
    w.key("at").value(opt.at);
    w.key("sup").value(bound.sup);
    w.key("bounded").value(bound.finite);
    w.key("x").begin_array();
    for (int k = 0; k < cc.grid.m; ++k) w.value(cc.grid.node(k));
    w.end_array();
    w.key("values").begin_array();
    for (const auto& comp : s.values) {
        w.begin_array();
        for (double v : comp) w.value(v);
        w.end_array();
    }
    w.end_array();
    w.key("derivative").begin_array();
    for (const auto& comp : s.deriv) {
        w.begin_array();
        for (double v : comp) w.value(v);
        w.end_array();
    }
    w.end_array();
    w.end_object();
    return write_report(opt.out_path, w.str());
}

int cmd_bracket(const CompiledConfig& cc, const CliOptions& opt) {
    const Functional* F = cc.find_functional(opt.bracket_f);
    const Functional* G = cc.find_functional(opt.bracket_g);
    if (!F || !G) {
        std::cerr << "error: unknown functional '" << (F ? opt.bracket_g : opt.bracket_f)
                  << "'\n";
        return 2;
    }
    const TestFunction* tf = cc.find_test_function(opt.at);
    if (!tf) {
        std::cerr << "error: unknown test function '" << opt.at << "'\n";
        return 2;
    }
    const FieldVecPtr u = state_from(*tf);
    const double value = bracket(cc.spec, AnyFunctional(*F), AnyFunctional(*G), u, cc.grid);
    JsonWriter w;
    w.begin_object();
    emit_header(w, "bracket");
    emit_config_echo(w, cc);
    w.key("F").value(opt.bracket_f);
    w.key("G").value(opt.bracket_g);
    w.key("at").value(opt.at);
    w.key("value").value(value);
    w.end_object();
    std::cerr << "{" << opt.bracket_f << ", " << opt.bracket_g << "}[" << opt.at
              << "] = " << value << "\n";
    return write_report(opt.out_path, w.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification engine for weakly nonlocal Poisson brackets of hydrodynamic type"};
    app.require_subcommand(1);

    CliOptions opt;
    app.add_option("--config", opt.config_path, "configuration file")->required();
    app.add_option("--out", opt.out_path, "report output path (default: stdout)");
    auto* seed_opt = app.add_option("--seed", opt.seed, "seed for randomized suites");
    app.add_option("--trials", opt.trials, "trial count for randomized suites");
    app.add_option("--samples", opt.samples, "sample point count for geometry suites");
    app.add_option("--grid-L", opt.grid_L, "grid half-width override");
    app.add_option("--grid-m", opt.grid_m, "grid point count override (odd)");
    app.add_option("--tol-geometry", opt.tol_geometry, "geometry/coefficient tolerance override");
    app.add_option("--tol-skew", opt.tol_skew, "skew residual tolerance override");
    app.add_option("--tol-jacobi", opt.tol_jacobi, "Jacobi residual tolerance override");

    auto* c_validate = app.add_subcommand("validate", "parse and validate the configuration");
    auto* c_classify = app.add_subcommand(
        "classify", "geometry + skew + Jacobi suites, Poisson verdict per Ferapontov");
    auto* c_geometry = app.add_subcommand("geometry-check", "GPC and coefficient tensor suite");
    auto* c_skew = app.add_subcommand("skew", "randomized skew-symmetry residual");
    auto* c_jacobi = app.add_subcommand("jacobi", "randomized Jacobi residual");
    auto* c_gateaux =
        app.add_subcommand("gateaux-check", "variational derivative vs Gateaux oracle audit");
    c_gateaux->add_option("--functional", opt.functional, "audit only this functional");
    auto* c_vd = app.add_subcommand("vd", "variational derivative dump");
    c_vd->add_option("--functional", opt.functional, "functional name")->required();
    c_vd->add_option("--at", opt.at, "test function name")->required();
    auto* c_bracket = app.add_subcommand("bracket", "evaluate {F,G} at a test function");
    c_bracket->add_option("F", opt.bracket_f, "first functional")->required();
    c_bracket->add_option("G", opt.bracket_g, "second functional")->required();
    c_bracket->add_option("--at", opt.at, "test function name")->required();

    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    opt.seed_override = seed_opt->count() > 0;

    std::vector<Diagnostic> diags;
    RunConfig raw = parse_config_file(opt.config_path, diags);
    apply_overrides(raw, opt);
    std::optional<CompiledConfig> cc;
    if (!has_errors(diags)) cc = compile_config(raw, diags);

    if (c_validate->parsed()) return cmd_validate(cc ? &*cc : nullptr, diags, opt);

    if (has_errors(diags) || !cc) {
        for (const Diagnostic& d : diags) std::cerr << "wnlpb: " << d.to_string() << "\n";
        return 2;
    }
    for (const Diagnostic& d : diags)
        if (d.severity == Diagnostic::Severity::Warning)
            std::cerr << "wnlpb: " << d.to_string() << "\n";

    try {
        if (c_classify->parsed()) return cmd_classify(*cc, opt);
        if (c_geometry->parsed()) return cmd_geometry(*cc, opt);
        if (c_skew->parsed()) return cmd_skew(*cc, opt);
        if (c_jacobi->parsed()) return cmd_jacobi(*cc, opt);
        if (c_gateaux->parsed()) return cmd_gateaux(*cc, opt);
        if (c_vd->parsed()) return cmd_vd(*cc, opt);
        if (c_bracket->parsed()) return cmd_bracket(*cc, opt);
    } catch (const std::exception& ex) {
        std::cerr << "wnlpb: runtime error: " << ex.what() << "\n";
        return 2;
    }
    return 2;
}
