#include "crowdsense/runner.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "crowdsense/simulator.hpp"

namespace crowdsense {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Rounds through the 9-significant-digit text form so JSON summaries carry
// exactly the same precision as the CSVs.
double rounded(double value) {
    return std::strtod(format_number(value).c_str(), nullptr);
}

std::string timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    std::tm parts{};
    gmtime_r(&now, &parts);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &parts);
    return buf;
}

std::string cell(double v) { return format_number(v); }
std::string cell(std::size_t v) { return std::to_string(v); }
std::string cell(std::int64_t v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "1" : "0"; }
std::string cell(SolverKind v) { return solver_name(v); }

struct Emitter {
    fs::path dir;
    std::vector<std::string> written;

    std::string csv(const std::string& name, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
        const fs::path path = dir / name;
        write_csv(path.string(), header, rows);
        written.push_back(path.string());
        return path.string();
    }

    void json_file(const std::string& name, const json& doc) {
        const fs::path path = dir / name;
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw IoError("cannot open " + path.string() + " for writing");
        out << doc.dump(2) << '\n';
        if (!out.flush()) throw IoError("failed writing " + path.string());
        written.push_back(path.string());
    }
};

std::vector<std::vector<std::string>> sweep_summary_rows(const std::vector<SweepSummary>& cells,
                                                         bool budget_axis) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(cells.size());
    for (const auto& c : cells) {
        std::vector<std::string> row;
        row.push_back(budget_axis ? cell(c.budget) : cell(c.size));
        row.push_back(cell(c.solver));
        row.push_back(cell(c.seeds));
        row.push_back(cell(c.utility_mean));
        row.push_back(cell(c.utility_stddev));
        row.push_back(cell(c.expected_utility_mean));
        row.push_back(cell(c.delay_mean));
        row.push_back(cell(c.delay_stddev));
        row.push_back(cell(c.spend_mean));
        row.push_back(cell(c.participants_mean));
        rows.push_back(std::move(row));
    }
    return rows;
}

json sweep_summary_json(const std::vector<SweepSummary>& cells, bool budget_axis) {
    json out = json::array();
    for (const auto& c : cells) {
        json entry = {
            {"solver", solver_name(c.solver)},
            {"seeds", c.seeds},
            {"utility_mean", rounded(c.utility_mean)},
            {"utility_stddev", rounded(c.utility_stddev)},
            {"expected_utility_mean", rounded(c.expected_utility_mean)},
            {"total_actual_delay_mean", rounded(c.delay_mean)},
            {"total_actual_delay_stddev", rounded(c.delay_stddev)},
            {"spend_mean", rounded(c.spend_mean)},
            {"participants_mean", rounded(c.participants_mean)},
        };
        if (budget_axis)
            entry["budget"] = rounded(c.budget);
        else
            entry["size"] = c.size;
        out.push_back(std::move(entry));
    }
    return out;
}

}  // namespace

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) out << ',';
        out << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    if (!out.flush()) throw IoError("failed writing " + path);
}

std::vector<std::string> run_command(const ExperimentConfig& base_config,
                                     const std::string& command, const RunOptions& options) {
    ExperimentConfig config = base_config;
    config.base_seed += options.seed_offset;
    if (options.solver_override.has_value()) config.solvers = {*options.solver_override};
    config.validate();

    Emitter emit;
    emit.dir = options.out_dir;
    try {
        fs::create_directories(emit.dir);
    } catch (const fs::filesystem_error& e) {
        throw IoError("cannot create output directory " + emit.dir.string() + ": " + e.what());
    }

    const auto started = std::chrono::steady_clock::now();
    std::map<std::string, double> timings;
    json summary;
    summary["command"] = command;
    summary["config_hash"] = config_hash(config);

    if (command == "budget-sweep") {
        const auto rows = experiment_budget_sweep(config, options.parallel);
        std::vector<std::vector<std::string>> table;
        table.reserve(rows.size());
        for (const auto& r : rows)
            table.push_back({cell(r.budget), cell(r.solver), cell(r.seed), cell(r.utility),
                             cell(r.total_actual_delay), cell(r.spend)});
        emit.csv("budget_sweep.csv",
                 {"budget", "solver", "seed", "utility", "total_actual_delay", "spend"}, table);

        const auto cells = summarize_sweep(rows);
        emit.csv("budget_sweep_summary.csv",
                 {"budget", "solver", "seeds", "utility_mean", "utility_stddev",
                  "expected_utility_mean", "delay_mean", "delay_stddev", "spend_mean",
                  "participants_mean"},
                 sweep_summary_rows(cells, true));
        summary["cells"] = sweep_summary_json(cells, true);
    } else if (command == "user-sweep") {
        const auto rows = experiment_user_sweep(config, options.parallel);
        std::vector<std::vector<std::string>> table;
        table.reserve(rows.size());
        for (const auto& r : rows)
            table.push_back({cell(r.size), cell(r.solver), cell(r.seed),
                             cell(r.expected_utility), cell(r.amplified), cell(r.utility),
                             cell(r.total_actual_delay), cell(r.spend)});
        emit.csv("user_sweep.csv",
                 {"size", "solver", "seed", "expected_utility", "amplified_utility", "utility",
                  "total_actual_delay", "spend"},
                 table);

        const auto cells = summarize_sweep(rows);
        emit.csv("user_sweep_summary.csv",
                 {"size", "solver", "seeds", "utility_mean", "utility_stddev",
                  "expected_utility_mean", "delay_mean", "delay_stddev", "spend_mean",
                  "participants_mean"},
                 sweep_summary_rows(cells, false));
        summary["cells"] = sweep_summary_json(cells, false);
    } else if (command == "reward-surface") {
        const auto rows = experiment_reward_surface(config);
        std::vector<std::vector<std::string>> table;
        table.reserve(rows.size());
        std::size_t full_reward_points = 0;
        for (const auto& r : rows) {
            table.push_back({cell(r.veracity), cell(r.actual_delay), cell(r.delay_score),
                             cell(r.final_score), cell(r.valid), cell(r.reward),
                             cell(r.reputation_delta)});
            if (r.reward == config.reward_surface.bid) ++full_reward_points;
        }
        emit.csv("reward_surface.csv",
                 {"veracity", "actual_delay", "delay_score", "final_score", "valid", "reward",
                  "reputation_delta"},
                 table);
        summary["points"] = rows.size();
        summary["full_reward_points"] = full_reward_points;
    } else if (command == "selection-bench") {
        const auto rows = experiment_selection_bench(config, &timings);
        std::vector<std::vector<std::string>> table;
        table.reserve(rows.size());
        std::size_t oracle_rows = 0;
        std::size_t oracle_matches = 0;
        for (const auto& r : rows) {
            table.push_back({cell(r.instance), cell(r.size), cell(r.budget), cell(r.solver),
                             cell(r.selected), cell(r.amplified), cell(r.total_bid),
                             cell(r.table_cells), std::to_string(r.matches_exhaustive)});
            if (r.solver == SolverKind::ExactDp && r.matches_exhaustive >= 0) {
                ++oracle_rows;
                if (r.matches_exhaustive == 1) ++oracle_matches;
            }
        }
        emit.csv("selection_bench.csv",
                 {"instance", "size", "budget", "solver", "selected", "amplified_utility",
                  "total_bid", "table_cells", "matches_exhaustive"},
                 table);
        summary["exact_dp_oracle_rows"] = oracle_rows;
        summary["exact_dp_oracle_matches"] = oracle_matches;
    } else if (command == "single-campaign") {
        const TaskSpec task = config.task.instantiate(config.population, config.base_seed);
        const CampaignResult r = run_campaign(config.population, task, config.reputation,
                                              config.solvers.front(), config.base_seed,
                                              config.selection);
        std::vector<std::vector<std::string>> table;
        table.reserve(r.participants.size());
        for (const auto& p : r.participants)
            table.push_back({p.user_id, cell(p.bid_price), cell(p.expected_delay),
                             cell(p.expected_utility), cell(p.amplified), cell(p.reputation),
                             cell(p.payload), cell(p.actual_delay), cell(p.dishonest),
                             cell(p.veracity), cell(p.delay_score), cell(p.final_score),
                             cell(p.valid), cell(p.passed), cell(p.reward),
                             cell(p.reputation_delta), cell(p.reputation_after)});
        emit.csv("campaign.csv",
                 {"user_id", "bid", "expected_delay", "expected_utility", "amplified_utility",
                  "reputation", "payload", "actual_delay", "dishonest", "veracity", "delay_score",
                  "final_score", "valid", "passed", "reward", "reputation_delta",
                  "reputation_after"},
                 table);
        summary["task_id"] = r.task_id;
        summary["solver"] = solver_name(r.solver);
        summary["seed"] = r.seed;
        summary["candidates"] = r.candidate_count;
        summary["participants"] = r.participants.size();
        summary["total_bid"] = rounded(r.selection.total_bid);
        summary["expected_utility"] = rounded(r.selection.achieved_utility);
        summary["amplified_utility"] = r.selection.achieved_amplified;
        summary["utility"] = rounded(r.crowdsourcing_utility);
        summary["total_actual_delay"] = rounded(r.total_actual_delay);
        summary["spend"] = rounded(r.total_reward);
        summary["valid_reports"] = r.valid_reports;
        summary["passed_reports"] = r.passed_reports;
    } else {
        throw std::invalid_argument("unknown command: " + command);
    }

    emit.json_file("summary.json", summary);

    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    json manifest;
    manifest["command"] = command;
    manifest["config_hash"] = config_hash(config);
    manifest["base_seed"] = config.base_seed;
    manifest["seed_offset"] = options.seed_offset;
    manifest["seeds"] = config.seeds;
    manifest["parallel"] = options.parallel;
    json solver_names = json::array();
    for (SolverKind k : config.solvers) solver_names.push_back(solver_name(k));
    manifest["solvers"] = solver_names;
    manifest["effective_config"] = effective_config(config);
    manifest["outputs"] = emit.written;
    if (!timings.empty()) manifest["timings"] = timings;
    manifest["wall_clock_ms"] = wall_ms;
    manifest["created_utc"] = timestamp_utc();
    emit.json_file("manifest.json", manifest);

    return emit.written;
}

}  // namespace crowdsense
