#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qsa/cli_run.hpp"
#include "qsa/json_io.hpp"

using namespace qsa;

namespace {

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    std::vector<const char*> argv{"qsa"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return CliResult{code, out.str(), err.str()};
}

// Scratch files live under the system temp directory and are removed by the
// fixture object.
struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& name, const std::string& content) {
        path = std::filesystem::temp_directory_path() / ("qsa_test_" + name);
        std::ofstream file(path);
        file << content;
    }
    ~TempFile() { std::filesystem::remove(path); }
};

const char* kModel = R"({
    "atoms": ["a", "b", "c"],
    "measures": {
        "m1": {"a": "1/2", "b": "1/2", "c": "0"},
        "m2": {"a": "0", "b": "1/2", "c": "1/2"}
    }
})";

} // namespace

TEST_CASE("classify preset emits an all-yes report") {
    const CliResult result = run({"classify", "--preset", "dominated_singleton"});
    REQUIRE(result.exit_code == 0);
    const Json j = Json::parse(result.out);
    CHECK(j["flags"]["kreps_yan"]["value"] == "yes");
    CHECK(j["flags"]["dominated"]["rule"] == "R1");
    CHECK(j.contains("explanation"));
}

TEST_CASE("classify accepts an explicit model file") {
    const TempFile model("classify_model.json", kModel);
    const CliResult result = run({"classify", "--input", model.path.string()});
    REQUIRE(result.exit_code == 0);
    const Json j = Json::parse(result.out);
    // Explicit finite families collapse to all-yes, verified directly.
    for (const auto& [name, flag] : j["flags"].items()) CHECK(flag["value"] == "yes");
    CHECK(j["provenance"].get<std::string>().find("explicit family") != std::string::npos);
}

TEST_CASE("classify accepts a symbolic descriptor file") {
    const TempFile descriptor("descriptor.json", R"({
        "cardinality": "continuum",
        "pairwise_disjoint_supports": true,
        "all_members_supported": true
    })");
    const CliResult result = run({"classify", "--input", descriptor.path.string()});
    REQUIRE(result.exit_code == 0);
    const Json j = Json::parse(result.out);
    CHECK(j["flags"]["dominated"]["value"] == "no");
    CHECK(j["flags"]["class_S"]["value"] == "yes");
}

TEST_CASE("reports are byte-identical across runs") {
    const CliResult first = run({"classify", "--preset", "robust_binomial"});
    const CliResult second = run({"classify", "--preset", "robust_binomial"});
    CHECK(first.out == second.out);
}

TEST_CASE("support of a family member") {
    const TempFile model("model.json", kModel);
    const CliResult result =
        run({"support", model.path.string(), "--measure", "m1", "--exhaustive"});
    REQUIRE(result.exit_code == 0);
    const Json j = Json::parse(result.out);
    CHECK(j["support"] == Json::parse(R"(["a","b"])"));
    CHECK(j["verified"] == true);
    CHECK(j["verified_exhaustive"] == true);
}

TEST_CASE("support of a measure charging a polar atom fails with NotDominated") {
    const char* lopsided = R"({
        "atoms": ["a", "b"],
        "measures": {"m1": {"a": "1", "b": "0"}}
    })";
    const TempFile model("polar_model.json", lopsided);
    const TempFile mu("mu.json", R"({"a": "1/2", "b": "1/2"})");
    const CliResult result =
        run({"support", model.path.string(), "--measure-file", mu.path.string()});
    CHECK(result.exit_code == 2);
    const Json j = Json::parse(result.out);
    CHECK(j["error"] == "NotDominated");
}

TEST_CASE("alternative reports disjoint supports") {
    const TempFile model("model2.json", kModel);
    const CliResult result = run({"alternative", model.path.string()});
    REQUIRE(result.exit_code == 0);
    const Json j = Json::parse(result.out);
    CHECK(j["equivalent_to_source"] == true);
    CHECK(j["pairwise_meets_zero"] == true);
    CHECK(j["supports"]["m1"] == Json::parse(R"(["a","b"])"));
    CHECK(j["supports"]["m2"] == Json::parse(R"(["c"])"));
}

TEST_CASE("price on the degenerate spec matches the classical value") {
    const char* tree = R"({
        "T": 2,
        "grid": 1,
        "bounds": {"u": "2", "U": "2", "d": "1/2", "D": "1/2", "pi": "1/2", "Pi": "1/2"}
    })";
    const TempFile spec("tree.json", tree);
    const CliResult result =
        run({"price", spec.path.string(), "--payoff", "call:1", "--oracle"});
    REQUIRE(result.exit_code == 0);
    const Json j = Json::parse(result.out);
    // Classical two-period binomial call struck at 1: the up-up leaf pays 3
    // and carries probability 1/4.
    CHECK(j["value"] == "3/4");
    CHECK(j["oracle_matches"] == true);
    CHECK(j["argmax"].contains("(root)"));
}

TEST_CASE("malformed JSON exits with code 1") {
    const TempFile broken("broken.json", "{ not json");
    const CliResult result = run({"alternative", broken.path.string()});
    CHECK(result.exit_code == 1);
    const Json j = Json::parse(result.out);
    CHECK(j["error"] == "SchemaError");
}

TEST_CASE("missing file exits with code 1") {
    const CliResult result = run({"alternative", "/nonexistent/model.json"});
    CHECK(result.exit_code == 1);
}

TEST_CASE("esssup and aggregate verbs") {
    const TempFile model("model3.json", kModel);
    const TempFile vars("vars.json", R"([{"a": "1"}, {"b": "2"}])");
    const CliResult sup = run({"esssup", model.path.string(), "--vars", vars.path.string()});
    REQUIRE(sup.exit_code == 0);
    CHECK(Json::parse(sup.out)["esssup"]["b"] == "2");

    const TempFile assignment("assignment.json", R"({
        "m1": {"a": "1", "b": "1", "c": "0"},
        "m2": {"a": "0", "b": "0", "c": "2"}
    })");
    const CliResult agg =
        run({"aggregate", model.path.string(), "--assignment", assignment.path.string()});
    REQUIRE(agg.exit_code == 0);
    const Json j = Json::parse(agg.out);
    CHECK(j["aggregator"]["a"] == "1");
    CHECK(j["aggregator"]["c"] == "2");
}

TEST_CASE("bipolar verb reports certificates") {
    const TempFile model("model4.json", kModel);
    const TempFile set("set.json", R"({"generators": [{"a": "1", "b": "1", "c": "1"}]})");
    const TempFile probes("probes.json", R"([{"a": "2"}])");
    const CliResult result = run({"bipolar", model.path.string(), "--set", set.path.string(),
                                  "--probes", probes.path.string()});
    REQUIRE(result.exit_code == 0);
    const Json j = Json::parse(result.out);
    CHECK(j["disagreements"].empty());
    REQUIRE(j["probes"].size() == 1);
    CHECK(j["probes"][0]["bipolar_member"] == false);
    CHECK(j["probes"][0]["optimum"] == "2");
}

TEST_CASE("risk verb evaluates and verifies") {
    const TempFile model("model5.json", kModel);
    const TempFile spec("risk.json", R"({"kind": "worst_case"})");
    const TempFile probes("rprobes.json", R"([{"a": "3", "b": "7", "c": "1"}])");
    const CliResult result = run({"risk", model.path.string(), "--spec", spec.path.string(),
                                  "--probes", probes.path.string(), "--grid", "diracs"});
    REQUIRE(result.exit_code == 0);
    const Json j = Json::parse(result.out);
    CHECK(j["evaluations"][0]["rho"] == "7");
    CHECK(j["representation"]["max_gap"] == "0");
}

TEST_CASE("--output writes the report to a file") {
    const auto target = std::filesystem::temp_directory_path() / "qsa_test_out.json";
    std::filesystem::remove(target);
    const CliResult result =
        run({"--output", target.string(), "classify", "--preset", "typical_paths"});
    REQUIRE(result.exit_code == 0);
    CHECK(result.out.empty());
    std::ifstream in(target);
    REQUIRE(in.good());
    Json j;
    in >> j;
    CHECK(j["flags"]["class_S"]["value"] == "yes");
    std::filesystem::remove(target);
}

TEST_CASE("selftest filter runs a single criterion") {
    const CliResult result = run({"selftest", "--filter", "classifier"});
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("PASS criterion 10") != std::string::npos);
    CHECK(result.out.find("criterion 5") == std::string::npos);
}
