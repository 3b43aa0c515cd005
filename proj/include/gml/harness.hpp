#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gml/check.hpp"

namespace gml {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Generic experiment configuration.  Empty / unset fields fall back to the
// experiment's own defaults.
struct ExperimentConfig {
    std::string experiment;
    std::vector<int> Ns;
    std::optional<long> trials;
    std::optional<double> delta;
    std::vector<double> index_fracs;  // bulk indices as fractions of N
    std::vector<double> ms;
    std::uint64_t seed = 1;
    int workers = 0;  // 0 = OpenMP default
    std::string out_dir;
    std::map<std::string, double> tolerances;
};

const std::vector<std::string>& experiment_names();
// Override keys accepted under [tolerances]; throws ConfigError for an unknown experiment.
const std::vector<std::string>& tolerance_keys(const std::string& experiment);

// Throws ConfigError with a schema message.
ExperimentConfig parse_config(const std::string& toml_text, const std::string& origin = "<string>");
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& c);
nlohmann::ordered_json config_json(const ExperimentConfig& c);

struct RunSummary {
    std::string experiment;
    SuiteResult result;
    double runtime_s = 0.0;
    bool passed() const { return result.passed(); }
};

// Runs the named experiment (worker count applied by the caller).
RunSummary run(const ExperimentConfig& c);

// Suites that are not owned by a single library module.
SuiteResult suite_pb_lemma(const ExperimentConfig& c);
SuiteResult suite_hermite(const ExperimentConfig& c);
SuiteResult suite_eigensolver(const ExperimentConfig& c);
SuiteResult suite_semicircle(const ExperimentConfig& c);
SuiteResult suite_schur(const ExperimentConfig& c);
SuiteResult suite_counting_moments(const ExperimentConfig& c);
SuiteResult suite_dpp_mixture(const ExperimentConfig& c);

// report.json holds only deterministic content (verdicts, estimates,
// config); runtimes and environment go to meta.json.
nlohmann::ordered_json report_json(const ExperimentConfig& c, const RunSummary& s);
nlohmann::ordered_json meta_json(const ExperimentConfig& c, const RunSummary& s, int workers);
void write_outputs(const std::string& dir, const ExperimentConfig& c, const RunSummary& s, int workers);
void write_error_report(const std::string& dir, const ExperimentConfig& c, const std::string& message);
std::string format_check(const Check& ch);

}  // namespace gml
