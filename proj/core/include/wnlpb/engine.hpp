#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wnlpb/bracket.hpp"
#include "wnlpb/config.hpp"
#include "wnlpb/geometry.hpp"

namespace wnlpb {

struct GeometrySuite {
    GeometryReport report;
    std::optional<double> gamma_divergence;  // vs derived Levi-Civita, when supplied
    bool gamma_divergence_pass = true;
    bool pass = false;
    double wall_ms = 0.0;
};

struct SkewSuite {
    Residual residual;
    SkewnessCheck preconditions;
    bool pass = false;
    double wall_ms = 0.0;
};

struct JacobiSuite {
    Residual residual;
    bool skipped = false;
    std::string skip_reason;
    SpotCheckResult spot;
    bool pass = false;
    double wall_ms = 0.0;
};

struct GateauxAudit {
    std::string functional;
    double max_deviation = 0.0;
    double bound = 0.0;  // tolerance * (1 + |value|) is applied per trial
    int trials = 0;
    bool pass = true;
    bool is_wnl = false;
    double max_vd_sup = 0.0;  // boundedness record
};

struct Verdict {
    std::string poisson;  // "yes" / "no" / "inconclusive"
    std::vector<std::string> reasons;
};

struct ClassifyResult {
    GeometrySuite geometry;
    SkewSuite skew;
    JacobiSuite jacobi;
    Verdict verdict;
};

// Suite runners; each takes the compiled config and derives everything else.
class Engine {
public:
    explicit Engine(const CompiledConfig& cfg);

    const CompiledConfig& config() const { return cfg_; }
    const GeometryContext& geometry_context() const { return *geom_; }
    std::vector<std::vector<double>> chart_samples(int count) const;

    GeometrySuite run_geometry() const;
    SkewSuite run_skew() const;
    JacobiSuite run_jacobi(bool skew_ok, const std::string& skew_note) const;
    std::vector<GateauxAudit> run_gateaux(const std::string& only_functional = "") const;
    ClassifyResult classify() const;

private:
    const CompiledConfig& cfg_;
    std::shared_ptr<GeometryContext> geom_;
};

}  // namespace wnlpb
