// gue-minor-lab <experiment> --config <path> [--seed S] [--workers W] [--out DIR]
//
// Exit status: 0 if every check passed, 1 if any check failed, 2 on a
// configuration or runtime error.  GML_OUT_DIR overrides the output directory
// given in the config file; --out overrides both.
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "gml/harness.hpp"
#include "gml/parallel.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo and quadrature experiments on GUE minors"};
    std::string experiment, config_path, out_dir;
    std::uint64_t seed = 0;
    int workers = 0;
    app.add_option("experiment", experiment, "experiment id")->required()->check(CLI::IsMember(gml::experiment_names()));
    app.add_option("--config", config_path, "TOML configuration file")->required()->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "override the configured seed");
    auto* workers_opt = app.add_option("--workers", workers, "worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
    auto* out_opt = app.add_option("--out", out_dir, "output directory");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    gml::ExperimentConfig cfg;
    try {
        cfg = gml::load_config(config_path);
    } catch (const gml::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (cfg.experiment != experiment) {
        std::cerr << "config error: " << config_path << " describes '" << cfg.experiment << "', not '" << experiment << "'\n";
        return 2;
    }
    if (*seed_opt) cfg.seed = seed;
    if (*workers_opt) cfg.workers = workers;
    if (const char* env = std::getenv("GML_OUT_DIR"); env && *env) cfg.out_dir = env;
    if (*out_opt) cfg.out_dir = out_dir;
    if (cfg.out_dir.empty()) cfg.out_dir = "results/" + experiment;

    if (cfg.workers > 0) gml::set_workers(cfg.workers);
    const int used_workers = gml::max_workers();
    try {
        const gml::RunSummary s = gml::run(cfg);
        gml::write_outputs(cfg.out_dir, cfg, s, used_workers);
        for (const auto& ch : s.result.checks) std::cout << gml::format_check(ch) << "\n";
        std::cout << (s.passed() ? "PASS " : "FAIL ") << experiment << " (" << s.runtime_s << " s, " << used_workers
                  << " workers) -> " << cfg.out_dir << "\n";
        return s.passed() ? 0 : 1;
    } catch (const gml::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        try {
            gml::write_error_report(cfg.out_dir, cfg, e.what());
        } catch (...) {
        }
        return 2;
    }
}
