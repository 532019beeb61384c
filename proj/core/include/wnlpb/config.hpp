#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wnlpb/bracket.hpp"
#include "wnlpb/geometry.hpp"
#include "wnlpb/schwartz.hpp"
#include "wnlpb/variational.hpp"

namespace wnlpb {

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string message;
    int line = 0;  // 0 when not tied to a config line

    std::string to_string() const;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Tolerances {
    double geometry = 1e-8;
    double coefficients = 1e-8;
    double skew = 1e-7;
    double jacobi = 1e-6;
    double vd_oracle = 5e-5;
    double gateaux = 1e-5;      // local functionals
    double gateaux_wnl = 2e-5;  // functionals with chains
    double gamma_divergence = 1e-8;
};

struct FunctionalConfig {
    std::string name;
    std::string outer_src;
    int outer_line = 0;
    std::vector<std::pair<std::vector<std::string>, int>> chains;  // sources + line
};

struct TestFunctionConfig {
    std::string name;
    std::vector<TestFunctionTerm> terms;
    int line = 0;
};

// Parsed (but not yet compiled) configuration file.
struct RunConfig {
    std::string path;
    std::string raw_text;

    int n = 1;
    std::vector<std::pair<std::string, int>> omega_lines;  // "u1 - u2 > 0"
    Box subchart;
    bool subchart_set = false;
    double delta_omega = 0.05;

    Grid grid;
    double eps_tail = 1e-14;

    std::map<std::string, std::pair<std::string, int>> tensor_entries;  // g11 -> (src, line)
    bool gamma_supplied = false;

    std::vector<FunctionalConfig> functionals;
    std::vector<TestFunctionConfig> test_functions;

    std::uint64_t seed = 0;
    bool seed_set = false;
    int trials = 32;
    int samples = 50;
    int max_chain_depth = 3;
    int max_chains = 4;

    Tolerances tol;
};

RunConfig parse_config_text(const std::string& text, const std::string& path,
                            std::vector<Diagnostic>& diagnostics);
RunConfig parse_config_file(const std::string& path, std::vector<Diagnostic>& diagnostics);

// Everything compiled and cross-checked, ready for the suites.
struct CompiledConfig {
    RunConfig raw;
    ChartSpec chart;
    Grid grid;
    BracketSpec spec;
    std::vector<std::pair<std::string, Functional>> functionals;
    std::vector<std::pair<std::string, TestFunction>> test_functions;

    const Functional* find_functional(const std::string& name) const;
    const TestFunction* find_test_function(const std::string& name) const;
};

// Validation per the bracket definition: dimensions, admissibility of every
// expression on the subchart, metric symmetry/nondegeneracy on samples, test
// function containment. Violations become diagnostics, never crashes.
std::optional<CompiledConfig> compile_config(const RunConfig& cfg,
                                             std::vector<Diagnostic>& diagnostics);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

// FNV-1a 64 of the raw config bytes, for the report's config echo.
std::string config_hash(const std::string& text);

}  // namespace wnlpb
