#pragma once
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

namespace gml {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Check {
    std::string id;
    std::string verdict;  // PASS | FAIL | REPORT-ONLY
    double value = kNaN;
    double bound = kNaN;
    std::string detail;
};

inline Check make_check(std::string id, bool ok, double value, double bound, std::string detail = {}) {
    return {std::move(id), ok ? "PASS" : "FAIL", value, bound, std::move(detail)};
}

inline Check report_only(std::string id, double value, std::string detail = {}) {
    return {std::move(id), "REPORT-ONLY", value, kNaN, std::move(detail)};
}

struct CsvRow {
    std::string experiment;
    int N = 0;
    long trial = 0;
    std::string statistic;
    double value = 0.0;
};

struct SuiteResult {
    std::vector<Check> checks;
    nlohmann::ordered_json data = nlohmann::ordered_json::object();
    std::vector<CsvRow> rows;

    bool passed() const {
        for (const auto& c : checks)
            if (c.verdict == "FAIL") return false;
        return true;
    }
    void append(const SuiteResult& o) {
        checks.insert(checks.end(), o.checks.begin(), o.checks.end());
        for (auto it = o.data.begin(); it != o.data.end(); ++it) data[it.key()] = it.value();
        rows.insert(rows.end(), o.rows.begin(), o.rows.end());
    }
};

}  // namespace gml
