#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "crowdsense/config.hpp"

namespace crowdsense {

// One campaign measurement inside a sweep. `utility` is the crowdsourcing
// utility (sum of assessed final scores); `expected_utility` is the
// selection-time objective on the raw scale.
struct SweepRow {
    double budget = 0.0;
    std::size_t size = 0;
    SolverKind solver = SolverKind::ExactDp;
    std::uint64_t seed = 0;
    std::size_t participants = 0;
    double expected_utility = 0.0;
    std::int64_t amplified = 0;
    double utility = 0.0;
    double total_actual_delay = 0.0;
    double spend = 0.0;
};

// Mean / spread over the seeds of one grid cell. stddev is the sample
// standard deviation (n - 1 denominator), 0 for a single seed.
struct SweepSummary {
    double budget = 0.0;
    std::size_t size = 0;
    SolverKind solver = SolverKind::ExactDp;
    std::size_t seeds = 0;
    double utility_mean = 0.0;
    double utility_stddev = 0.0;
    double expected_utility_mean = 0.0;
    double delay_mean = 0.0;
    double delay_stddev = 0.0;
    double spend_mean = 0.0;
    double participants_mean = 0.0;
};

struct SurfaceRow {
    double veracity = 0.0;
    double actual_delay = 0.0;
    double delay_score = 0.0;
    double final_score = 0.0;
    bool valid = false;
    double reward = 0.0;
    double reputation_delta = 0.0;
};

struct BenchRow {
    std::size_t instance = 0;
    std::size_t size = 0;
    double budget = 0.0;
    SolverKind solver = SolverKind::ExactDp;
    std::size_t selected = 0;
    std::int64_t amplified = 0;
    double total_bid = 0.0;
    std::uint64_t table_cells = 0;
    int matches_exhaustive = -1;  // 1 / 0, -1 when the oracle was not run
};

// Campaigns over budgets x solvers x seeds with a fixed population. Rows
// come back in grid order no matter how many worker threads ran them.
std::vector<SweepRow> experiment_budget_sweep(const ExperimentConfig& config,
                                              unsigned parallel = 1);

// Campaigns over population sizes x solvers x seeds at the template budget.
// Sharing the seed across sizes makes the populations nested: size k's users
// are a prefix of size k + 1's.
std::vector<SweepRow> experiment_user_sweep(const ExperimentConfig& config,
                                            unsigned parallel = 1);

// Reward and reputation response of one synthetic participant over a
// veracity x actual-delay grid. No randomness involved.
std::vector<SurfaceRow> experiment_reward_surface(const ExperimentConfig& config);

// Random selection instances solved by every configured solver, plus the
// exhaustive oracle on instances small enough for it. Per-solver mean wall
// clock in milliseconds lands in `timings` when provided.
std::vector<BenchRow> experiment_selection_bench(const ExperimentConfig& config,
                                                 std::map<std::string, double>* timings = nullptr);

// Collapses sweep rows into per-cell means, preserving grid order.
std::vector<SweepSummary> summarize_sweep(const std::vector<SweepRow>& rows);

}  // namespace crowdsense
