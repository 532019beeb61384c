#include <doctest.h>

#include "test_helpers.hpp"
#include "wnlpb/config.hpp"
#include "wnlpb/engine.hpp"

using namespace wnlpb;
using namespace wnlpb_test;

namespace {

std::optional<CompiledConfig> compile_text(const std::string& text,
                                           std::vector<Diagnostic>& diags) {
    RunConfig raw = parse_config_text(text, "<inline>", diags);
    if (has_errors(diags)) return std::nullopt;
    return compile_config(raw, diags);
}

const char* kMinimal = R"cfg(
[chart]
n = 1
[grid]
L = 12
m = 513
[bracket]
g11 = "1"
[run]
seed = 7
trials = 2
samples = 10
)cfg";

}  // namespace

TEST_CASE("bundled corpus configs compile cleanly") {
    for (const char* name : {"gardner.cfg", "flat2d.cfg", "example_constant_curvature.cfg",
                             "broken_gauss.cfg", "broken_gamma.cfg"}) {
        CompiledConfig cc = load_config(name);
        CHECK(cc.spec.n >= 1);
        CHECK(!cc.test_functions.empty());
    }
    CompiledConfig gardner = load_config("gardner.cfg");
    CHECK(gardner.find_functional("kdv") != nullptr);
    CHECK(gardner.find_functional("nope") == nullptr);
    CHECK(gardner.find_test_function("gauss1") != nullptr);
    CHECK(gardner.spec.gamma_derived);
    CompiledConfig gamma = load_config("broken_gamma.cfg");
    CHECK(!gamma.spec.gamma_derived);
}

TEST_CASE("a minimal config compiles with defaults") {
    std::vector<Diagnostic> diags;
    auto cc = compile_text(kMinimal, diags);
    REQUIRE(cc.has_value());
    CHECK(cc->grid.m == 513);
    CHECK(cc->raw.tol.skew == 1e-7);
    CHECK(cc->raw.tol.jacobi == 1e-6);
    CHECK(cc->raw.tol.geometry == 1e-8);
}

TEST_CASE("a subchart crossing the metric pole is diagnosed as singular") {
    std::vector<Diagnostic> diags;
    auto cc = compile_text(R"cfg(
[chart]
n = 2
box = u1 -1.0 1.0
box = u2 -1.0 1.0
[grid]
L = 12
m = 513
[bracket]
g11 = "-2*(u-v)^2"
g22 = "(u-v)^2"
[run]
seed = 7
)cfg",
                           diags);
    CHECK(!cc.has_value());
    bool found = false;
    for (const auto& d : diags)
        if (d.message.find("singular") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("a non-symmetric metric is diagnosed") {
    std::vector<Diagnostic> diags;
    auto cc = compile_text(R"cfg(
[chart]
n = 2
[grid]
L = 12
m = 513
[bracket]
g11 = "1"
g12 = "0.5"
g22 = "1"
[run]
seed = 7
)cfg",
                           diags);
    CHECK(!cc.has_value());
    bool found = false;
    for (const auto& d : diags)
        if (d.message.find("symmetric") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("tensor entries must be hydrodynamic") {
    std::vector<Diagnostic> diags;
    auto cc = compile_text(R"cfg(
[chart]
n = 1
[grid]
L = 12
m = 513
[bracket]
g11 = "1 + u1_x"
[run]
seed = 7
)cfg",
                           diags);
    CHECK(!cc.has_value());
    bool found = false;
    for (const auto& d : diags)
        if (d.message.find("hydrodynamic") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("test functions escaping Omega are diagnosed, not fatal crashes") {
    std::vector<Diagnostic> diags;
    auto cc = compile_text(R"cfg(
[chart]
n = 1
omega = 1 - u1 > 0
omega = u1 + 1 > 0
[grid]
L = 12
m = 513
[bracket]
g11 = "1"
[testfunction big]
term = u1 1.0 0.0 2.0
[run]
seed = 7
)cfg",
                           diags);
    CHECK(!cc.has_value());
    bool found = false;
    for (const auto& d : diags)
        if (d.message.find("escapes Omega") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("omega must keep the origin admissible") {
    std::vector<Diagnostic> diags;
    auto cc = compile_text(R"cfg(
[chart]
n = 1
omega = u1 > 0.5
[grid]
L = 12
m = 513
[bracket]
g11 = "1"
[run]
seed = 7
)cfg",
                           diags);
    CHECK(!cc.has_value());
}

TEST_CASE("unknown keys and malformed lines carry line numbers") {
    std::vector<Diagnostic> diags;
    RunConfig raw = parse_config_text("[chart]\nn = 1\nbogus_key = 3\n", "<inline>", diags);
    REQUIRE(has_errors(diags));
    CHECK(diags[0].line == 3);
    CHECK(diags[0].to_string().find("bogus_key") != std::string::npos);
}

TEST_CASE("chain depth and chain count limits are enforced") {
    std::vector<Diagnostic> diags;
    auto cc = compile_text(R"cfg(
[chart]
n = 1
[grid]
L = 12
m = 513
[bracket]
g11 = "1"
[functional toodeep]
outer = "u1"
chain = "u1" "u1" "u1" "u1"
[run]
seed = 7
)cfg",
                           diags);
    CHECK(!cc.has_value());
}

TEST_CASE("classify is deterministic for a fixed config and seed") {
    CompiledConfig cc = load_config("broken_gauss.cfg");
    cc.raw.trials = 4;
    Engine e1(cc), e2(cc);
    const ClassifyResult r1 = e1.classify();
    const ClassifyResult r2 = e2.classify();
    CHECK(r1.skew.residual.value == r2.skew.residual.value);
    CHECK(r1.jacobi.residual.value == r2.jacobi.residual.value);
    CHECK(r1.geometry.report.gpc2.max_residual == r2.geometry.report.gpc2.max_residual);
    CHECK(r1.verdict.poisson == r2.verdict.poisson);
}

TEST_CASE("config hash is stable and content-sensitive") {
    CHECK(config_hash("abc") == config_hash("abc"));
    CHECK(config_hash("abc") != config_hash("abd"));
}
