#include "crowdsense/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <tuple>

#include "crowdsense/assessment.hpp"
#include "crowdsense/rng.hpp"

namespace crowdsense {

namespace {

// Runs work(0..count-1) on up to `parallel` threads. Work items write to
// disjoint preallocated slots, so the output is independent of scheduling.
void run_cells(std::size_t count, unsigned parallel,
               const std::function<void(std::size_t)>& work) {
    if (parallel <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto loop = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                work(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    const std::size_t thread_count =
        std::min<std::size_t>(parallel, count);
    std::vector<std::thread> workers;
    workers.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) workers.emplace_back(loop);
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

SweepRow row_from_campaign(const CampaignResult& r, double budget, std::size_t size) {
    SweepRow row;
    row.budget = budget;
    row.size = size;
    row.solver = r.solver;
    row.seed = r.seed;
    row.participants = r.participants.size();
    row.expected_utility = r.selection.achieved_utility;
    row.amplified = r.selection.achieved_amplified;
    row.utility = r.crowdsourcing_utility;
    row.total_actual_delay = r.total_actual_delay;
    row.spend = r.total_reward;
    return row;
}

}  // namespace

std::vector<SweepRow> experiment_budget_sweep(const ExperimentConfig& config, unsigned parallel) {
    config.validate();
    const std::size_t n_solvers = config.solvers.size();
    const std::size_t cells = config.budgets.size() * n_solvers * config.seeds;
    std::vector<SweepRow> rows(cells);
    run_cells(cells, parallel, [&](std::size_t idx) {
        const std::size_t s = idx % config.seeds;
        const std::size_t rest = idx / config.seeds;
        const SolverKind solver = config.solvers[rest % n_solvers];
        const double budget = config.budgets[rest / n_solvers];
        const std::uint64_t seed = config.base_seed + s;

        TaskTemplate tpl = config.task;
        tpl.budget = budget;
        const TaskSpec task = tpl.instantiate(config.population, seed);
        const CampaignResult r = run_campaign(config.population, task, config.reputation, solver,
                                              seed, config.selection);
        rows[idx] = row_from_campaign(r, budget, config.population.n_users);
    });
    return rows;
}

std::vector<SweepRow> experiment_user_sweep(const ExperimentConfig& config, unsigned parallel) {
    config.validate();
    const std::size_t n_solvers = config.solvers.size();
    const std::size_t cells = config.population_sizes.size() * n_solvers * config.seeds;
    std::vector<SweepRow> rows(cells);
    run_cells(cells, parallel, [&](std::size_t idx) {
        const std::size_t s = idx % config.seeds;
        const std::size_t rest = idx / config.seeds;
        const SolverKind solver = config.solvers[rest % n_solvers];
        const std::size_t size = config.population_sizes[rest / n_solvers];
        const std::uint64_t seed = config.base_seed + s;

        PopulationModel population = config.population;
        population.n_users = size;
        const TaskSpec task = config.task.instantiate(population, seed);
        const CampaignResult r =
            run_campaign(population, task, config.reputation, solver, seed, config.selection);
        rows[idx] = row_from_campaign(r, config.task.budget, size);
    });
    return rows;
}

std::vector<SurfaceRow> experiment_reward_surface(const ExperimentConfig& config) {
    config.validate();
    const RewardSurfaceSettings& rs = config.reward_surface;
    const AssessmentParams& ap = config.task.assessment;
    const Application probe("probe", rs.bid, rs.expected_delay);

    const std::size_t veracity_points =
        static_cast<std::size_t>(std::floor(1.0 / rs.veracity_step + 1e-9)) + 1;
    const std::size_t delay_points =
        static_cast<std::size_t>(std::floor(rs.max_delay / rs.delay_step + 1e-9)) + 1;

    std::vector<SurfaceRow> rows;
    rows.reserve(veracity_points * delay_points);
    for (std::size_t i = 0; i < veracity_points; ++i) {
        const double veracity = std::min(static_cast<double>(i) * rs.veracity_step, 1.0);
        for (std::size_t j = 0; j < delay_points; ++j) {
            const double actual_delay =
                std::min(static_cast<double>(j) * rs.delay_step, rs.max_delay);

            ReportAssessment assessment;
            assessment.user_id = probe.user_id;
            assessment.veracity = veracity;
            assessment.valid = actual_delay <= rs.delay_threshold;
            if (assessment.valid) {
                assessment.delay_score = delay_deviation_score(actual_delay, rs.expected_delay,
                                                               rs.delay_threshold, ap);
                assessment.final_score = ap.veracity_weight * veracity +
                                         (1.0 - ap.veracity_weight) * assessment.delay_score;
            }

            SurfaceRow row;
            row.veracity = veracity;
            row.actual_delay = actual_delay;
            row.delay_score = assessment.delay_score;
            row.final_score = assessment.final_score;
            row.valid = assessment.valid;
            row.reward = allocate_reward(assessment, probe, ap).reward;
            row.reputation_delta =
                evaluate_reputation_delta({assessment}, {probe}, config.reputation)[0].delta;
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<BenchRow> experiment_selection_bench(const ExperimentConfig& config,
                                                 std::map<std::string, double>* timings) {
    config.validate();
    std::map<std::string, std::pair<double, std::size_t>> clocks;
    std::vector<BenchRow> rows;

    for (std::size_t size : config.bench.sizes) {
        for (std::size_t inst = 0; inst < config.bench.instances; ++inst) {
            const std::uint64_t seed = derive_seed(
                config.base_seed, Stream::Bench,
                (static_cast<std::uint64_t>(size) << 32) | static_cast<std::uint64_t>(inst));

            PopulationModel population = config.population;
            population.n_users = size;
            const TaskSpec task = config.task.instantiate(population, seed);

            std::vector<MobileUser> users;
            std::vector<Application> applications;
            users.reserve(size);
            applications.reserve(size);
            for (std::size_t i = 0; i < size; ++i) {
                SampledUser sampled = sample_user(population, config.reputation, seed, i);
                users.push_back(std::move(sampled.user));
                applications.push_back(std::move(sampled.application));
            }
            const std::vector<Candidate> candidates = filter_candidates(
                users, applications, task, config.reputation, config.selection.amplification);

            std::vector<SolverKind> solvers = config.solvers;
            const bool oracle_feasible = candidates.size() <= 20;
            if (oracle_feasible &&
                std::find(solvers.begin(), solvers.end(), SolverKind::Exhaustive) == solvers.end())
                solvers.push_back(SolverKind::Exhaustive);

            std::optional<SelectionResult> oracle;
            std::vector<std::pair<SolverKind, SelectionResult>> results;
            for (SolverKind solver : solvers) {
                if (solver == SolverKind::Exhaustive && !oracle_feasible) continue;
                const auto started = std::chrono::steady_clock::now();
                SelectionResult result;
                switch (solver) {
                    case SolverKind::ExactDp:
                        result = select_exact_dp(candidates, task.budget);
                        break;
                    case SolverKind::Fptas:
                        result = select_fptas(candidates, task.budget, config.selection.epsilon);
                        break;
                    case SolverKind::Greedy:
                        result = select_greedy_baseline(candidates, task.budget);
                        break;
                    case SolverKind::Exhaustive:
                        result = select_exhaustive(candidates, task.budget);
                        break;
                }
                const double ms = std::chrono::duration<double, std::milli>(
                                      std::chrono::steady_clock::now() - started)
                                      .count();
                auto& clock = clocks[solver_name(solver)];
                clock.first += ms;
                clock.second += 1;
                if (solver == SolverKind::Exhaustive) oracle = result;
                results.emplace_back(solver, std::move(result));
            }

            for (const auto& [solver, result] : results) {
                BenchRow row;
                row.instance = inst;
                row.size = size;
                row.budget = task.budget;
                row.solver = solver;
                row.selected = result.selected.size();
                row.amplified = result.achieved_amplified;
                row.total_bid = result.total_bid;
                row.table_cells = result.table_cells;
                if (oracle.has_value())
                    row.matches_exhaustive =
                        result.achieved_amplified == oracle->achieved_amplified ? 1 : 0;
                rows.push_back(row);
            }
        }
    }

    if (timings != nullptr) {
        for (const auto& [name, clock] : clocks)
            (*timings)["bench." + name + ".mean_ms"] =
                clock.first / static_cast<double>(clock.second);
    }
    return rows;
}

std::vector<SweepSummary> summarize_sweep(const std::vector<SweepRow>& rows) {
    std::vector<SweepSummary> cells;
    std::map<std::tuple<double, std::size_t, std::string>, std::size_t> index;
    struct Acc {
        double utility = 0, utility_sq = 0, expected = 0;
        double delay = 0, delay_sq = 0, spend = 0, participants = 0;
    };
    std::vector<Acc> accs;

    for (const SweepRow& row : rows) {
        const auto key = std::make_tuple(row.budget, row.size, solver_name(row.solver));
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, cells.size()).first;
            SweepSummary cell;
            cell.budget = row.budget;
            cell.size = row.size;
            cell.solver = row.solver;
            cells.push_back(cell);
            accs.push_back(Acc{});
        }
        SweepSummary& cell = cells[it->second];
        Acc& acc = accs[it->second];
        cell.seeds += 1;
        acc.utility += row.utility;
        acc.utility_sq += row.utility * row.utility;
        acc.expected += row.expected_utility;
        acc.delay += row.total_actual_delay;
        acc.delay_sq += row.total_actual_delay * row.total_actual_delay;
        acc.spend += row.spend;
        acc.participants += static_cast<double>(row.participants);
    }

    for (std::size_t i = 0; i < cells.size(); ++i) {
        SweepSummary& cell = cells[i];
        const Acc& acc = accs[i];
        const double n = static_cast<double>(cell.seeds);
        cell.utility_mean = acc.utility / n;
        cell.expected_utility_mean = acc.expected / n;
        cell.delay_mean = acc.delay / n;
        cell.spend_mean = acc.spend / n;
        cell.participants_mean = acc.participants / n;
        if (cell.seeds > 1) {
            cell.utility_stddev = std::sqrt(
                std::max(0.0, (acc.utility_sq - n * cell.utility_mean * cell.utility_mean) /
                                  (n - 1.0)));
            cell.delay_stddev = std::sqrt(
                std::max(0.0, (acc.delay_sq - n * cell.delay_mean * cell.delay_mean) / (n - 1.0)));
        }
    }
    return cells;
}

}  // namespace crowdsense
