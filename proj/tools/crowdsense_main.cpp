#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "crowdsense/config.hpp"
#include "crowdsense/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Budgeted crowdsensing participant selection and campaign simulation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string solver;
    crowdsense::RunOptions options;

    app.add_option("--config", config_path, "experiment config file (JSON)");
    app.add_option("--out", options.out_dir, "output directory")->capture_default_str();
    app.add_option("--seed-offset", options.seed_offset, "offset added to the config base seed");
    app.add_option("--parallel", options.parallel, "worker threads for independent grid cells")
        ->capture_default_str();
    app.add_option("--solver", solver,
                   "run only this solver (exact_dp, fptas, greedy, exhaustive)");

    app.add_subcommand("budget-sweep", "campaigns across task budgets");
    app.add_subcommand("user-sweep", "campaigns across population sizes");
    app.add_subcommand("reward-surface", "reward and reputation response grid");
    app.add_subcommand("selection-bench", "solver comparison on random instances");
    app.add_subcommand("single-campaign", "one campaign with per-participant detail");

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        crowdsense::ExperimentConfig config;
        if (!config_path.empty()) config = crowdsense::load_config(config_path);
        if (!solver.empty()) {
            try {
                options.solver_override = crowdsense::solver_from_name(solver);
            } catch (const std::invalid_argument& e) {
                throw crowdsense::ConfigError(std::string("--solver: ") + e.what());
            }
        }
        const auto written = crowdsense::run_command(config, command, options);
        for (const auto& file : written) std::printf("%s\n", file.c_str());
        return 0;
    } catch (const crowdsense::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const crowdsense::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
