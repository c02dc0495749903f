#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "crowdsense/incentives.hpp"
#include "crowdsense/selection.hpp"
#include "crowdsense/simulator.hpp"

namespace crowdsense {

// Configuration rejection: parse failures, unknown keys, violated
// invariants. The message names the offending key path.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameters of the reward / reputation response surface: one synthetic
// participant probed over a grid of veracity values and actual delays.
struct RewardSurfaceSettings {
    double bid = 1000.0;
    double expected_delay = 20.0;
    double delay_threshold = 40.0;
    double veracity_step = 0.05;
    double delay_step = 1.0;
    double max_delay = 50.0;
};

struct BenchSettings {
    std::size_t instances = 20;
    std::vector<std::size_t> sizes = {10, 11, 12};
};

struct ExperimentConfig {
    PopulationModel population;
    TaskTemplate task;
    ReputationParams reputation = ReputationParams::defaults();
    SelectionSettings selection;

    std::vector<SolverKind> solvers = {SolverKind::ExactDp, SolverKind::Greedy};
    std::size_t seeds = 30;
    std::uint64_t base_seed = 1;
    std::vector<double> budgets = {200, 300, 400, 500, 600, 700, 800, 900, 1000, 1100, 1200};
    std::vector<std::size_t> population_sizes = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    BenchSettings bench;
    RewardSurfaceSettings reward_surface;

    void validate() const;
};

// Parses and fully validates a config; every omitted key takes its default.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& doc);

// Canonical serialization of the config with all defaults applied. Two
// configs produce the same document iff every effective parameter matches.
nlohmann::json effective_config(const ExperimentConfig& config);

// FNV-1a 64 over the canonical serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace crowdsense
