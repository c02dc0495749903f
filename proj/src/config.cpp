#include "crowdsense/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <utility>

namespace crowdsense {

namespace {

using nlohmann::json;

// Tracks which keys of one JSON object were consumed; finish() rejects the
// rest so typos cannot silently fall back to defaults.
class Section {
public:
    Section(const json& value, std::string path) : value_(&value), path_(std::move(path)) {
        if (!value.is_object()) throw ConfigError(where() + ": expected an object");
    }

    bool has(const char* key) const { return value_->contains(key); }

    const std::string& path() const { return path_; }

    std::string item_path(const char* key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    double number(const char* key, double fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(item_path(key) + ": expected a number");
        return v.get<double>();
    }

    std::size_t count(const char* key, std::size_t fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
            throw ConfigError(item_path(key) + ": expected a non-negative integer");
        return static_cast<std::size_t>(v.get<std::int64_t>());
    }

    std::uint64_t seed(const char* key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
            throw ConfigError(item_path(key) + ": expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    bool flag(const char* key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(item_path(key) + ": expected a boolean");
        return v.get<bool>();
    }

    std::string text(const char* key, std::string fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(item_path(key) + ": expected a string");
        return v.get<std::string>();
    }

    std::pair<double, double> range(const char* key, std::pair<double, double> fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw ConfigError(item_path(key) + ": expected [low, high]");
        return {v[0].get<double>(), v[1].get<double>()};
    }

    std::vector<double> numbers(const char* key, std::vector<double> fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_array()) throw ConfigError(item_path(key) + ": expected an array of numbers");
        std::vector<double> out;
        for (const auto& item : v) {
            if (!item.is_number())
                throw ConfigError(item_path(key) + ": expected an array of numbers");
            out.push_back(item.get<double>());
        }
        return out;
    }

    std::vector<std::size_t> counts(const char* key, std::vector<std::size_t> fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_array()) throw ConfigError(item_path(key) + ": expected an array of integers");
        std::vector<std::size_t> out;
        for (const auto& item : v) {
            if (!item.is_number_integer() || item.get<std::int64_t>() <= 0)
                throw ConfigError(item_path(key) + ": expected an array of positive integers");
            out.push_back(static_cast<std::size_t>(item.get<std::int64_t>()));
        }
        return out;
    }

    std::vector<std::string> texts(const char* key) {
        const json& v = raw(key);
        if (!v.is_array()) throw ConfigError(item_path(key) + ": expected an array of strings");
        std::vector<std::string> out;
        for (const auto& item : v) {
            if (!item.is_string())
                throw ConfigError(item_path(key) + ": expected an array of strings");
            out.push_back(item.get<std::string>());
        }
        return out;
    }

    Section child(const char* key) { return Section(raw(key), item_path(key)); }

    void finish() {
        for (const auto& [k, v] : value_->items()) {
            (void)v;
            if (used_.find(k) == used_.end())
                throw ConfigError("unknown key: " + item_path(k.c_str()));
        }
    }

private:
    std::string where() const { return path_.empty() ? std::string("config") : path_; }

    const json& raw(const char* key) {
        used_.insert(key);
        return value_->at(key);
    }

    const json* value_;
    std::string path_;
    std::set<std::string> used_;
};

template <typename Fn>
auto with_context(const std::string& path, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

BehaviorProfile parse_behavior(Section s) {
    BehaviorProfile b;
    b.dishonest_threshold = s.number("dishonest_threshold", b.dishonest_threshold);
    b.dishonest_scale = s.number("dishonest_scale", b.dishonest_scale);
    auto payload = s.range("payload_range", {b.payload_low, b.payload_high});
    b.payload_low = payload.first;
    b.payload_high = payload.second;
    b.payload_truth = s.number("payload_truth", b.payload_truth);
    b.payload_noise_frac = s.number("payload_noise_frac", b.payload_noise_frac);
    b.mismatch_noise_frac = s.number("mismatch_noise_frac", b.mismatch_noise_frac);
    b.full_fidelity_overlap = s.number("full_fidelity_overlap", b.full_fidelity_overlap);
    b.delay_noise_frac = s.number("delay_noise_frac", b.delay_noise_frac);
    s.finish();
    return b;
}

PopulationModel parse_population(Section s) {
    PopulationModel p;
    p.n_users = s.count("n_users", p.n_users);
    p.attribute_universe = s.count("attribute_universe", p.attribute_universe);
    p.attrs_per_user = s.count("attrs_per_user", p.attrs_per_user);
    p.task_attrs = s.count("task_attrs", p.task_attrs);
    auto bids = s.range("bid_range", {p.bid_low, p.bid_high});
    p.bid_low = bids.first;
    p.bid_high = bids.second;
    auto delays = s.range("expected_delay_range", {p.delay_low, p.delay_high});
    p.delay_low = delays.first;
    p.delay_high = delays.second;
    const std::string dist = s.text("reputation_distribution", "normal");
    if (dist == "uniform")
        p.reputation_distribution = ReputationDistribution::Uniform;
    else if (dist == "normal")
        p.reputation_distribution = ReputationDistribution::Normal;
    else
        throw ConfigError(s.item_path("reputation_distribution") +
                          ": expected \"uniform\" or \"normal\"");
    p.reputation_mean = s.number("reputation_mean", p.reputation_mean);
    p.reputation_stddev = s.number("reputation_stddev", p.reputation_stddev);
    if (s.has("behavior")) p.behavior = parse_behavior(s.child("behavior"));
    s.finish();
    return p;
}

UtilityWeights parse_weights(Section s) {
    double ws = 1.0 / 3, wd = 1.0 / 3, wr = 1.0 / 3;
    if (s.has("preset")) {
        const std::string preset = s.text("preset", "");
        if (preset == "balanced") {
            ws = wd = wr = 1.0 / 3;
        } else if (preset == "social") {
            ws = 0.9, wd = 0.05, wr = 0.05;
        } else if (preset == "delay") {
            ws = 0.05, wd = 0.9, wr = 0.05;
        } else if (preset == "reputation") {
            ws = 0.05, wd = 0.05, wr = 0.9;
        } else {
            throw ConfigError(s.item_path("preset") +
                              ": expected balanced, social, delay, or reputation");
        }
        if (s.has("social_weight") || s.has("delay_weight") || s.has("reputation_weight"))
            throw ConfigError(s.item_path("preset") + ": excludes explicit factor weights");
    } else {
        ws = s.number("social_weight", ws);
        wd = s.number("delay_weight", wd);
        wr = s.number("reputation_weight", wr);
    }
    const double floor_s = s.number("social_floor", 0.2);
    const double floor_d = s.number("delay_floor", 0.2);
    const double base_r = s.number("reputation_baseline", 0.5);
    s.finish();
    return with_context(s.path(), [&] {
        return UtilityWeights(ws, wd, wr, floor_s, floor_d, base_r);
    });
}

AssessmentParams parse_assessment(Section s) {
    AssessmentParams d = AssessmentParams::defaults();
    const double veracity_weight = s.number("veracity_weight", d.veracity_weight);
    const double delay_slack = s.number("delay_slack", d.delay_slack);
    const double penalty_scale = s.number("penalty_scale", d.penalty_scale);
    const double delay_shape = s.number("delay_shape", d.delay_shape);
    const double reward_shape = s.number("reward_shape", d.reward_shape);
    const double quality_threshold = s.number("quality_threshold", d.quality_threshold);
    const std::string mode = s.text("veracity_mode", "clamped");
    const std::string similarity = s.text("similarity", d.similarity);
    const double similarity_range = s.number("similarity_range", d.similarity_range);
    s.finish();

    AssessmentParams out = with_context(s.path(), [&] {
        return AssessmentParams(veracity_weight, delay_slack, penalty_scale, delay_shape,
                                reward_shape, quality_threshold);
    });
    if (mode == "clamped")
        out.veracity_mode = VeracityMode::Clamped;
    else if (mode == "renormalized")
        out.veracity_mode = VeracityMode::Renormalized;
    else
        throw ConfigError(s.item_path("veracity_mode") +
                          ": expected \"clamped\" or \"renormalized\"");
    out.similarity = similarity;
    out.similarity_range = similarity_range;
    if (!(std::isfinite(similarity_range) && similarity_range > 0.0))
        throw ConfigError(s.item_path("similarity_range") + ": must be positive");
    return out;
}

TaskTemplate parse_task(Section s) {
    TaskTemplate t;
    t.id = s.text("id", t.id);
    t.budget = s.number("budget", t.budget);
    t.delay_threshold = s.number("delay_threshold", t.delay_threshold);
    if (s.has("weights")) t.weights = parse_weights(s.child("weights"));
    if (s.has("assessment")) t.assessment = parse_assessment(s.child("assessment"));
    if (s.has("attributes")) {
        const auto names = s.texts("attributes");
        t.attributes = with_context(s.item_path("attributes"),
                                    [&] { return SocialAttributeSet::from_list(names); });
    }
    s.finish();
    return t;
}

ReputationParams parse_reputation(Section s) {
    ReputationParams d = ReputationParams::defaults();
    const double min = s.number("min", d.min_reputation);
    const double max = s.number("max", d.max_reputation);
    const double initial = s.number("initial", d.initial_reputation);
    const double reward = s.number("reward_factor", d.reward_factor);
    const double punishment = s.number("punishment_factor", d.punishment_factor);
    const double threshold = s.number("quality_threshold", d.quality_threshold);
    const double update_scale = s.number("update_scale", d.update_scale);
    const bool include_failed = s.flag("include_failed_in_shares", d.include_failed_in_shares);
    s.finish();

    ReputationParams out = with_context(s.path(), [&] {
        return ReputationParams(min, max, initial, reward, punishment, threshold);
    });
    if (!(std::isfinite(update_scale) && update_scale > 0.0))
        throw ConfigError(s.item_path("update_scale") + ": must be positive");
    out.update_scale = update_scale;
    out.include_failed_in_shares = include_failed;
    return out;
}

SelectionSettings parse_selection(Section s) {
    SelectionSettings out;
    out.amplification = s.number("amplification", out.amplification);
    out.epsilon = s.number("epsilon", out.epsilon);
    s.finish();
    return out;
}

BenchSettings parse_bench(Section s) {
    BenchSettings out;
    out.instances = s.count("instances", out.instances);
    out.sizes = s.counts("sizes", out.sizes);
    s.finish();
    return out;
}

RewardSurfaceSettings parse_surface(Section s) {
    RewardSurfaceSettings out;
    out.bid = s.number("bid", out.bid);
    out.expected_delay = s.number("expected_delay", out.expected_delay);
    out.delay_threshold = s.number("delay_threshold", out.delay_threshold);
    out.veracity_step = s.number("veracity_step", out.veracity_step);
    out.delay_step = s.number("delay_step", out.delay_step);
    out.max_delay = s.number("max_delay", out.max_delay);
    s.finish();
    return out;
}

void require_config(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

}  // namespace

void ExperimentConfig::validate() const {
    with_context("population", [&] {
        population.validate(reputation);
        return 0;
    });
    with_context("task", [&] {
        (void)task.instantiate(population, 0);
        return 0;
    });

    require_config(std::isfinite(selection.amplification) && selection.amplification >= 1.0,
                   "selection.amplification: must be >= 1");
    require_config(selection.epsilon > 0.0 && selection.epsilon < 1.0,
                   "selection.epsilon: must lie in (0, 1)");

    require_config(!solvers.empty(), "experiment.solvers: must not be empty");
    std::set<SolverKind> unique_solvers(solvers.begin(), solvers.end());
    require_config(unique_solvers.size() == solvers.size(),
                   "experiment.solvers: duplicate solver");
    require_config(seeds >= 1, "experiment.seeds: must be >= 1");

    require_config(!budgets.empty(), "experiment.budgets: must not be empty");
    for (double b : budgets)
        require_config(std::isfinite(b) && b >= 0.0, "experiment.budgets: entries must be >= 0");
    require_config(std::is_sorted(budgets.begin(), budgets.end()) &&
                       std::adjacent_find(budgets.begin(), budgets.end()) == budgets.end(),
                   "experiment.budgets: must be strictly ascending");

    require_config(!population_sizes.empty(), "experiment.population_sizes: must not be empty");
    require_config(std::is_sorted(population_sizes.begin(), population_sizes.end()) &&
                       std::adjacent_find(population_sizes.begin(), population_sizes.end()) ==
                           population_sizes.end(),
                   "experiment.population_sizes: must be strictly ascending");

    require_config(bench.instances >= 1, "experiment.bench.instances: must be >= 1");
    require_config(!bench.sizes.empty(), "experiment.bench.sizes: must not be empty");
    require_config(std::is_sorted(bench.sizes.begin(), bench.sizes.end()) &&
                       std::adjacent_find(bench.sizes.begin(), bench.sizes.end()) ==
                           bench.sizes.end(),
                   "experiment.bench.sizes: must be strictly ascending");

    const RewardSurfaceSettings& rs = reward_surface;
    require_config(std::isfinite(rs.bid) && rs.bid > 0.0,
                   "experiment.reward_surface.bid: must be positive");
    require_config(rs.expected_delay > 0.0 && rs.expected_delay < rs.delay_threshold,
                   "experiment.reward_surface.expected_delay: must lie in (0, delay_threshold)");
    require_config(rs.expected_delay + task.assessment.delay_slack < rs.delay_threshold,
                   "experiment.reward_surface: delay_slack leaves no room before the threshold");
    require_config(rs.veracity_step > 0.0 && rs.veracity_step <= 1.0,
                   "experiment.reward_surface.veracity_step: must lie in (0, 1]");
    require_config(rs.delay_step > 0.0, "experiment.reward_surface.delay_step: must be positive");
    require_config(rs.max_delay >= rs.delay_threshold,
                   "experiment.reward_surface.max_delay: must reach the delay threshold");
}

ExperimentConfig config_from_json(const nlohmann::json& doc) {
    Section root(doc, "");
    ExperimentConfig cfg;
    if (root.has("reputation")) cfg.reputation = parse_reputation(root.child("reputation"));
    if (root.has("population")) cfg.population = parse_population(root.child("population"));
    if (root.has("task")) cfg.task = parse_task(root.child("task"));
    if (root.has("selection")) cfg.selection = parse_selection(root.child("selection"));
    if (root.has("experiment")) {
        Section s = root.child("experiment");
        if (s.has("solvers")) {
            cfg.solvers.clear();
            for (const auto& name : s.texts("solvers"))
                cfg.solvers.push_back(with_context(s.item_path("solvers"),
                                                   [&] { return solver_from_name(name); }));
        }
        cfg.seeds = s.count("seeds", cfg.seeds);
        cfg.base_seed = s.seed("base_seed", cfg.base_seed);
        cfg.budgets = s.numbers("budgets", cfg.budgets);
        cfg.population_sizes = s.counts("population_sizes", cfg.population_sizes);
        if (s.has("bench")) cfg.bench = parse_bench(s.child("bench"));
        if (s.has("reward_surface"))
            cfg.reward_surface = parse_surface(s.child("reward_surface"));
        s.finish();
    }
    root.finish();
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return config_from_json(doc);
}

nlohmann::json effective_config(const ExperimentConfig& config) {
    const PopulationModel& p = config.population;
    const BehaviorProfile& b = p.behavior;
    const TaskTemplate& t = config.task;
    const ReputationParams& r = config.reputation;

    nlohmann::json doc;
    doc["population"] = {
        {"n_users", p.n_users},
        {"attribute_universe", p.attribute_universe},
        {"attrs_per_user", p.attrs_per_user},
        {"task_attrs", p.task_attrs},
        {"bid_range", {p.bid_low, p.bid_high}},
        {"expected_delay_range", {p.delay_low, p.delay_high}},
        {"reputation_distribution",
         p.reputation_distribution == ReputationDistribution::Uniform ? "uniform" : "normal"},
        {"reputation_mean", p.reputation_mean},
        {"reputation_stddev", p.reputation_stddev},
        {"behavior",
         {
             {"dishonest_threshold", b.dishonest_threshold},
             {"dishonest_scale", b.dishonest_scale},
             {"payload_range", {b.payload_low, b.payload_high}},
             {"payload_truth", b.payload_truth},
             {"payload_noise_frac", b.payload_noise_frac},
             {"mismatch_noise_frac", b.mismatch_noise_frac},
             {"full_fidelity_overlap", b.full_fidelity_overlap},
             {"delay_noise_frac", b.delay_noise_frac},
         }},
    };
    doc["task"] = {
        {"id", t.id},
        {"budget", t.budget},
        {"delay_threshold", t.delay_threshold},
        {"weights",
         {
             {"social_weight", t.weights.social_weight},
             {"delay_weight", t.weights.delay_weight},
             {"reputation_weight", t.weights.reputation_weight},
             {"social_floor", t.weights.social_floor},
             {"delay_floor", t.weights.delay_floor},
             {"reputation_baseline", t.weights.reputation_baseline},
         }},
        {"assessment",
         {
             {"veracity_weight", t.assessment.veracity_weight},
             {"delay_slack", t.assessment.delay_slack},
             {"penalty_scale", t.assessment.penalty_scale},
             {"delay_shape", t.assessment.delay_shape},
             {"reward_shape", t.assessment.reward_shape},
             {"quality_threshold", t.assessment.quality_threshold},
             {"veracity_mode",
              t.assessment.veracity_mode == VeracityMode::Clamped ? "clamped" : "renormalized"},
             {"similarity", t.assessment.similarity},
             {"similarity_range", t.assessment.similarity_range},
         }},
    };
    if (t.attributes.has_value()) {
        nlohmann::json names = nlohmann::json::array();
        for (const auto& a : t.attributes->items()) names.push_back(a);
        doc["task"]["attributes"] = names;
    }
    doc["reputation"] = {
        {"min", r.min_reputation},
        {"max", r.max_reputation},
        {"initial", r.initial_reputation},
        {"reward_factor", r.reward_factor},
        {"punishment_factor", r.punishment_factor},
        {"quality_threshold", r.quality_threshold},
        {"update_scale", r.update_scale},
        {"include_failed_in_shares", r.include_failed_in_shares},
    };
    doc["selection"] = {
        {"amplification", config.selection.amplification},
        {"epsilon", config.selection.epsilon},
    };
    nlohmann::json solver_names = nlohmann::json::array();
    for (SolverKind k : config.solvers) solver_names.push_back(solver_name(k));
    doc["experiment"] = {
        {"solvers", solver_names},
        {"seeds", config.seeds},
        {"base_seed", config.base_seed},
        {"budgets", config.budgets},
        {"population_sizes", config.population_sizes},
        {"bench",
         {
             {"instances", config.bench.instances},
             {"sizes", config.bench.sizes},
         }},
        {"reward_surface",
         {
             {"bid", config.reward_surface.bid},
             {"expected_delay", config.reward_surface.expected_delay},
             {"delay_threshold", config.reward_surface.delay_threshold},
             {"veracity_step", config.reward_surface.veracity_step},
             {"delay_step", config.reward_surface.delay_step},
             {"max_delay", config.reward_surface.max_delay},
         }},
    };
    return doc;
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string dump = effective_config(config).dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace crowdsense
