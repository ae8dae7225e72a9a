// command line front end: validate a config, run its scenario, print the
// summary path. exit code 0 on success, 1 on numerical failure, 2 on any
// configuration or usage problem.

#include <CLI11.hpp>

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "revdis/errors.hpp"
#include "revdis/scenario.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

int main(int argc, char** argv) {
    CLI::App app{"cavity field with a quadratically coupled mechanical bath: "
                 "steady states, spectra, and thermometry"};
    std::string scenario_arg;
    std::string config_path;
    std::string out_dir;
    int threads = 0;
    app.add_option("scenario", scenario_arg,
                   "one of fig1..fig5, compare, spectrum, thermometry")
        ->required();
    app.add_option("--config", config_path, "path to a JSON config file")
        ->required();
    app.add_option("--out", out_dir,
                   "output directory (overrides output_dir in the config)");
    app.add_option("--threads", threads,
                   "worker thread count (0 keeps the OpenMP default)")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        revdis::scenario_from_name(scenario_arg);
        revdis::ScenarioConfig cfg = revdis::validate_config(config_path);
        if (scenario_arg != revdis::scenario_name(cfg.scenario))
            throw revdis::ConfigError(
                "scenario argument '" + scenario_arg +
                "' does not match config scenario '" +
                revdis::scenario_name(cfg.scenario) + "'");
        if (!out_dir.empty()) cfg.output_dir = out_dir;
#ifdef _OPENMP
        if (threads > 0) omp_set_num_threads(threads);
#else
        (void)threads;
#endif
        const revdis::RunSummary summary = revdis::run(cfg);
        for (const std::string& w : summary.warnings)
            std::cerr << "warning: " << w << '\n';
        std::cout << (std::filesystem::path(cfg.output_dir) /
                      (summary.scenario + "_summary.json"))
                         .string()
                  << '\n';
        return 0;
    } catch (const revdis::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
