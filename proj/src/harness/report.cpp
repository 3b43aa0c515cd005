#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "gml/harness.hpp"

namespace gml {

using json = nlohmann::ordered_json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

std::string compiler_id() {
#if defined(__clang__)
    return "clang " __clang_version__;
#elif defined(__GNUC__)
    return "gcc " __VERSION__;
#else
    return "unknown";
#endif
}

}  // namespace

json report_json(const ExperimentConfig& c, const RunSummary& s) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["experiment"] = s.experiment;
    j["status"] = s.passed() ? "PASS" : "FAIL";
    j["config"] = config_json(c);
    json checks = json::array();
    for (const Check& ch : s.result.checks)
        checks.push_back({{"id", ch.id}, {"verdict", ch.verdict}, {"value", number_or_null(ch.value)},
                          {"bound", number_or_null(ch.bound)}, {"detail", ch.detail}});
    j["checks"] = checks;
    j["data"] = s.result.data;
    return j;
}

json meta_json(const ExperimentConfig& c, const RunSummary& s, int workers) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["experiment"] = c.experiment;
    j["runtime_s"] = s.runtime_s;
    j["workers"] = workers;
    j["compiler"] = compiler_id();
#ifdef _OPENMP
    j["openmp"] = _OPENMP;
#endif
    j["rng"] = "philox4x32-10, Box-Muller normals, stream key hash(seed, trial, tag)";
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["finished_utc"] = buf;
    return j;
}

void write_outputs(const std::string& dir, const ExperimentConfig& c, const RunSummary& s, int workers) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    write_text(fs::path(dir) / "report.json", report_json(c, s).dump(2) + "\n");
    write_text(fs::path(dir) / "meta.json", meta_json(c, s, workers).dump(2) + "\n");
    std::ofstream csv(fs::path(dir) / "results.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write results.csv in " + dir);
    csv << "experiment,N,trial,statistic,value\n";
    char buf[64];
    for (const CsvRow& r : s.result.rows) {
        std::snprintf(buf, sizeof buf, "%.17g", r.value);
        csv << r.experiment << ',' << r.N << ',' << r.trial << ',' << r.statistic << ',' << buf << '\n';
    }
}

void write_error_report(const std::string& dir, const ExperimentConfig& c, const std::string& message) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["experiment"] = c.experiment;
    j["status"] = "ERROR";
    j["error"] = message;
    write_text(fs::path(dir) / "report.json", j.dump(2) + "\n");
}

std::string format_check(const Check& ch) {
    char buf[128];
    if (std::isfinite(ch.bound))
        std::snprintf(buf, sizeof buf, "  value=%.6g bound=%.6g", ch.value, ch.bound);
    else
        std::snprintf(buf, sizeof buf, "  value=%.6g", ch.value);
    std::string s = ch.verdict + " " + ch.id + buf;
    if (!ch.detail.empty()) s += "  (" + ch.detail + ")";
    return s;
}

}  // namespace gml
