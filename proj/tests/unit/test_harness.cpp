#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "gml/harness.hpp"

using namespace gml;
namespace fs = std::filesystem;

namespace {

const char* kPb = R"(schema_version = 1
experiment = "pb-lemma"
seed = 5
[params]
trials = 200
)";

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("gml_unit_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read_file(const fs::path& p) {
    std::ostringstream s;
    s << std::ifstream(p).rdbuf();
    return s.str();
}

int run_cli(const std::string& args) {
    const int rc = std::system((std::string("\"") + GML_CLI_PATH + "\" " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("config parsing") {
    const ExperimentConfig c = parse_config(R"(schema_version = 1
experiment = "gaps"
seed = 9
[params]
N = [200, 400]
trials = 1000
delta = 0.25
index = [0.5]
[tolerances]
C_tail = 12.0
)");
    CHECK(c.experiment == "gaps");
    CHECK(c.Ns == std::vector<int>{200, 400});
    CHECK(c.trials == 1000);
    CHECK(c.delta == 0.25);
    CHECK(c.seed == 9);
    CHECK(c.tolerances.at("C_tail") == 12.0);
    CHECK(parse_config("schema_version = 1\nexperiment = \"schur\"\n[params]\nN = 30\n").Ns == std::vector<int>{30});
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config("experiment = \"gaps\"\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("schema_version = 2\nexperiment = \"gaps\"\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("schema_version = 1\nexperiment = \"nope\"\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("schema_version = 1\nexperiment = \"gaps\"\ncolour = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("schema_version = 1\nexperiment = \"gaps\"\n[params]\ndelta = 0.7\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("schema_version = 1\nexperiment = \"gaps\"\n[params]\ntrials = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("schema_version = 1\nexperiment = \"gaps\"\n[params]\nN = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("schema_version = 1\nexperiment = \"gaps\"\n[tolerances]\nks_tol = 0.1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("schema_version = 1\nexperiment = \"gaps\"\n[params\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.toml"), ConfigError);
    for (const auto& e : experiment_names()) CHECK_NOTHROW(tolerance_keys(e));
}

TEST_CASE("a pb-lemma run passes and its report is deterministic") {
    ExperimentConfig c = parse_config(kPb);
    const RunSummary a = run(c), b = run(c);
    CHECK(a.passed());
    CHECK(report_json(c, a).dump() == report_json(c, b).dump());
    const auto j = report_json(c, a);
    CHECK(j["schema_version"] == kReportSchemaVersion);
    CHECK(j["status"] == "PASS");
    CHECK(!j.contains("runtime_s"));
    const fs::path dir = scratch("pb");
    write_outputs(dir.string(), c, a, 1);
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "meta.json"));
    CHECK(fs::exists(dir / "results.csv"));
    CHECK(read_file(dir / "results.csv").rfind("experiment,N,trial,statistic,value", 0) == 0);
}

TEST_CASE("command line: exit codes and output directory") {
    const fs::path dir = scratch("cli");
    write_file(dir / "pb.toml", kPb);
    write_file(dir / "bad.toml", "schema_version = 1\nexperiment = \"pb-lemma\"\n[params]\ntrials = -3\n");
    // an unreachable tolerance makes the run fail on purpose
    write_file(dir / "fail.toml", std::string(kPb) + "[tolerances]\nsup_constant = 0.01\n");

    CHECK(run_cli("pb-lemma --config \"" + (dir / "pb.toml").string() + "\" --out \"" + (dir / "o1").string() + "\"") == 0);
    CHECK(fs::exists(dir / "o1" / "report.json"));
    CHECK(run_cli("pb-lemma --config \"" + (dir / "bad.toml").string() + "\" --out \"" + (dir / "o2").string() + "\"") == 2);
    CHECK(run_cli("pb-lemma --config \"" + (dir / "missing.toml").string() + "\"") == 2);
    CHECK(run_cli("no-such-experiment --config \"" + (dir / "pb.toml").string() + "\"") == 2);
    CHECK(run_cli("pb-lemma --config \"" + (dir / "fail.toml").string() + "\" --out \"" + (dir / "o3").string() + "\"") == 1);

    const std::string env = "GML_OUT_DIR=\"" + (dir / "env").string() + "\" ";
    const int rc = std::system((env + "\"" + GML_CLI_PATH + "\" pb-lemma --config \"" + (dir / "pb.toml").string() + "\" --workers 1 >/dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    CHECK(fs::exists(dir / "env" / "report.json"));
    CHECK(read_file(dir / "o1" / "report.json") == read_file(dir / "env" / "report.json"));
}

TEST_CASE("shipped configs load and name their own experiment") {
    int seen = 0;
    for (const auto& f : fs::directory_iterator(fs::path(GML_SOURCE_DIR) / "configs")) {
        if (f.path().extension() != ".toml") continue;
        const ExperimentConfig c = load_config(f.path().string());
        CHECK(c.experiment == f.path().stem().string());
        ++seen;
    }
    CHECK(seen == static_cast<int>(experiment_names().size()));
}
