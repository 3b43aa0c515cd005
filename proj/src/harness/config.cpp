#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "gml/harness.hpp"
#include "toml.hpp"

namespace gml {

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{
        "semicircle", "gaps", "gaudin-compare", "dpp-consistency", "pb-lemma", "schur", "universality",
        "interlacing-variance", "minor-variance", "rigidity", "hermite", "eigensolver",
    };
    return names;
}

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& msg) { throw ConfigError(origin + ": " + msg); }

void reject_unknown(const toml::table& t, const std::set<std::string>& known, const std::string& where,
                    const std::string& origin) {
    for (const auto& [k, v] : t)
        if (!known.count(std::string(k.str()))) fail(origin, "unknown key '" + std::string(k.str()) + "' in " + where);
}

double as_number(const toml::node& n, const std::string& key, const std::string& origin) {
    if (auto v = n.value<double>()) return *v;
    fail(origin, "'" + key + "' must be a number");
}

// Accepts a scalar or an array of scalars.
template <class T>
std::vector<T> number_list(const toml::node& n, const std::string& key, const std::string& origin) {
    std::vector<T> out;
    auto take = [&](const toml::node& e) {
        if constexpr (std::is_integral_v<T>) {
            auto v = e.value_exact<int64_t>();
            if (!v) fail(origin, "'" + key + "' must hold integers");
            out.push_back(static_cast<T>(*v));
        } else {
            out.push_back(as_number(e, key, origin));
        }
    };
    if (const auto* arr = n.as_array()) {
        for (const auto& e : *arr) take(e);
        if (out.empty()) fail(origin, "'" + key + "' must not be empty");
    } else {
        take(n);
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    toml::table tbl;
    try {
        tbl = toml::parse(text, origin);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << e.description() << " at line " << e.source().begin.line;
        fail(origin, os.str());
    }
    reject_unknown(tbl, {"schema_version", "experiment", "seed", "workers", "out", "params", "tolerances"}, "top level", origin);
    const auto ver = tbl["schema_version"].value<int64_t>();
    if (!ver) fail(origin, "missing integer 'schema_version'");
    if (*ver != kConfigSchemaVersion)
        fail(origin, "schema_version " + std::to_string(*ver) + " unsupported (expected " + std::to_string(kConfigSchemaVersion) + ")");
    ExperimentConfig c;
    const auto exp = tbl["experiment"].value<std::string>();
    if (!exp) fail(origin, "missing string 'experiment'");
    c.experiment = *exp;
    if (auto n = tbl["seed"].node()) {
        auto v = n->value_exact<int64_t>();
        if (!v || *v < 0) fail(origin, "'seed' must be a non-negative integer");
        c.seed = static_cast<std::uint64_t>(*v);
    }
    if (auto n = tbl["workers"].node()) {
        auto v = n->value_exact<int64_t>();
        if (!v || *v < 0) fail(origin, "'workers' must be a non-negative integer");
        c.workers = static_cast<int>(*v);
    }
    if (auto n = tbl["out"].node()) {
        auto v = n->value<std::string>();
        if (!v) fail(origin, "'out' must be a string");
        c.out_dir = *v;
    }
    if (auto n = tbl["params"].node()) {
        const auto* p = n->as_table();
        if (!p) fail(origin, "'params' must be a table");
        reject_unknown(*p, {"N", "trials", "delta", "index", "m"}, "[params]", origin);
        if (auto e = p->get("N")) c.Ns = number_list<int>(*e, "N", origin);
        if (auto e = p->get("trials")) {
            auto v = e->value_exact<int64_t>();
            if (!v) fail(origin, "'trials' must be an integer");
            c.trials = static_cast<long>(*v);
        }
        if (auto e = p->get("delta")) c.delta = as_number(*e, "delta", origin);
        if (auto e = p->get("index")) c.index_fracs = number_list<double>(*e, "index", origin);
        if (auto e = p->get("m")) c.ms = number_list<double>(*e, "m", origin);
    }
    if (auto n = tbl["tolerances"].node()) {
        const auto* t = n->as_table();
        if (!t) fail(origin, "'tolerances' must be a table");
        for (const auto& [k, v] : *t) c.tolerances[std::string(k.str())] = as_number(v, std::string(k.str()), origin);
    }
    try {
        validate(c);
    } catch (const ConfigError& e) {
        fail(origin, e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

const std::vector<std::string>& tolerance_keys(const std::string& experiment) {
    static const std::map<std::string, std::vector<std::string>> keys{
        {"semicircle", {"k_sigma", "ks_tol"}},
        {"gaps", {"C_tail", "C_lower", "slope_tol", "ratio_max"}},
        {"gaudin-compare", {"sup_tol", "mean_tol"}},
        {"dpp-consistency", {"mean_tol", "variance_ratio_lo", "variance_ratio_hi", "tv_tol", "tv_gue_tol"}},
        {"pb-lemma", {"pmf_tol", "sup_constant", "bernstein_c"}},
        {"schur", {"residual_coefficient"}},
        {"universality", {"floor", "k_sigma"}},
        {"interlacing-variance", {"slope_max", "alt_ratio_max"}},
        {"minor-variance", {"rel_tol", "k_sigma", "literal_endpoint"}},
        {"rigidity", {"width_factor", "max_fraction"}},
        {"hermite", {"orthonormality_tol", "identity_tol", "wronskian_tol"}},
        {"eigensolver", {"backward_tol", "oracle_tol"}},
    };
    auto it = keys.find(experiment);
    if (it == keys.end()) throw ConfigError("unknown experiment '" + experiment + "'");
    return it->second;
}

void validate(const ExperimentConfig& c) {
    const auto& keys = tolerance_keys(c.experiment);
    for (const auto& [k, v] : c.tolerances)
        if (std::find(keys.begin(), keys.end(), k) == keys.end())
            throw ConfigError("unknown tolerance '" + k + "' for experiment '" + c.experiment + "'");
    if (c.trials && *c.trials < 1) throw ConfigError("trials must be >= 1");
    if (c.delta && !(*c.delta > 0.0 && *c.delta < 0.5)) throw ConfigError("delta must lie in (0, 0.5)");
    for (int N : c.Ns)
        if (N < 2) throw ConfigError("N must be >= 2");
    for (double f : c.index_fracs)
        if (!(f > 0.0 && f < 1.0)) throw ConfigError("index fractions must lie in (0, 1)");
    for (double m : c.ms)
        if (!(m > 0.0)) throw ConfigError("m must be positive");
    if (c.workers < 0) throw ConfigError("workers must be >= 0");
}

nlohmann::ordered_json config_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["experiment"] = c.experiment;
    j["seed"] = c.seed;
    j["N"] = c.Ns;
    j["trials"] = c.trials ? nlohmann::ordered_json(*c.trials) : nlohmann::ordered_json();
    j["delta"] = c.delta ? nlohmann::ordered_json(*c.delta) : nlohmann::ordered_json();
    j["index"] = c.index_fracs;
    j["m"] = c.ms;
    j["tolerances"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : c.tolerances) j["tolerances"][k] = v;
    return j;
}

}  // namespace gml
