#include "crowdsense/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

#include "crowdsense/assessment.hpp"
#include "crowdsense/rng.hpp"
#include "crowdsense/utility.hpp"

namespace crowdsense {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

std::string attribute_name(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "a%03zu", index + 1);
    return buf;
}

std::string user_name(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "u%04zu", index + 1);
    return buf;
}

SocialAttributeSet draw_attributes(Rng& rng, std::size_t universe, std::size_t count) {
    std::set<std::string> items;
    for (int idx :
         rng.sample_without_replacement(static_cast<int>(universe), static_cast<int>(count)))
        items.insert(attribute_name(static_cast<std::size_t>(idx)));
    return SocialAttributeSet(std::move(items));
}

}  // namespace

void PopulationModel::validate(const ReputationParams& params) const {
    require(n_users >= 1, "n_users must be >= 1");
    require(attribute_universe >= 1, "attribute_universe must be >= 1");
    require(attrs_per_user >= 1 && attrs_per_user <= attribute_universe,
            "attrs_per_user must lie in [1, attribute_universe]");
    require(task_attrs >= 1 && task_attrs <= attribute_universe,
            "task_attrs must lie in [1, attribute_universe]");
    require(std::isfinite(bid_low) && std::isfinite(bid_high) && bid_low > 0.0 &&
                bid_low < bid_high,
            "bid range must satisfy 0 < low < high");
    require(std::isfinite(delay_low) && std::isfinite(delay_high) && delay_low > 0.0 &&
                delay_low < delay_high,
            "expected-delay range must satisfy 0 < low < high");
    require(std::isfinite(reputation_mean) && reputation_mean >= params.min_reputation &&
                reputation_mean <= params.max_reputation,
            "reputation_mean must lie inside the reputation range");
    require(std::isfinite(reputation_stddev) && reputation_stddev >= 0.0,
            "reputation_stddev must be >= 0");

    const BehaviorProfile& b = behavior;
    require(b.dishonest_threshold >= 0.0 && b.dishonest_threshold <= 1.0,
            "dishonest_threshold must lie in [0, 1]");
    require(b.dishonest_scale > 0.0 && b.dishonest_scale <= 1.0,
            "dishonest_scale must lie in (0, 1]");
    require(std::isfinite(b.payload_low) && std::isfinite(b.payload_high) &&
                b.payload_low < b.payload_high,
            "payload range must satisfy low < high");
    require(b.payload_truth >= b.payload_low && b.payload_truth <= b.payload_high,
            "payload_truth must lie inside the payload range");
    require(b.payload_noise_frac >= 0.0, "payload_noise_frac must be >= 0");
    require(b.mismatch_noise_frac >= 0.0, "mismatch_noise_frac must be >= 0");
    require(b.full_fidelity_overlap > 0.0 && b.full_fidelity_overlap <= 1.0,
            "full_fidelity_overlap must lie in (0, 1]");
    require(b.delay_noise_frac >= 0.0, "delay_noise_frac must be >= 0");
}

TaskSpec TaskTemplate::instantiate(const PopulationModel& population, std::uint64_t seed) const {
    SocialAttributeSet attrs;
    if (attributes.has_value()) {
        attrs = *attributes;
    } else {
        Rng rng(derive_seed(seed, Stream::TaskAttributes, 0));
        attrs = draw_attributes(rng, population.attribute_universe, population.task_attrs);
    }
    return TaskSpec(id, std::move(attrs), budget, delay_threshold, weights, assessment);
}

double bad_report_probability(const BehaviorProfile& behavior, double reputation) {
    if (reputation < behavior.dishonest_threshold) return 1.0 - reputation;
    return behavior.dishonest_scale * (1.0 - reputation);
}

double payload_noise_stddev(const BehaviorProfile& behavior, std::size_t overlap,
                            std::size_t task_attrs) {
    const double full = behavior.full_fidelity_overlap * static_cast<double>(task_attrs);
    const double mismatch =
        std::max(0.0, 1.0 - static_cast<double>(overlap) / full);
    const double range = behavior.payload_high - behavior.payload_low;
    return range * (behavior.payload_noise_frac + behavior.mismatch_noise_frac * mismatch);
}

SampledUser sample_user(const PopulationModel& population, const ReputationParams& params,
                        std::uint64_t seed, std::size_t index) {
    Rng rng(derive_seed(seed, Stream::User, index));
    SocialAttributeSet attrs =
        draw_attributes(rng, population.attribute_universe, population.attrs_per_user);
    double reputation;
    if (population.reputation_distribution == ReputationDistribution::Uniform) {
        reputation = rng.uniform(params.min_reputation, params.max_reputation);
    } else {
        reputation = std::clamp(rng.normal(population.reputation_mean,
                                           population.reputation_stddev),
                                params.min_reputation, params.max_reputation);
    }
    const double bid = rng.uniform(population.bid_low, population.bid_high);
    const double delay = rng.uniform(population.delay_low, population.delay_high);

    const std::string id = user_name(index);
    return SampledUser{MobileUser(id, std::move(attrs), reputation, params),
                       Application(id, bid, delay)};
}

DrawnReport sample_report(const PopulationModel& population, const TaskSpec& task,
                          const MobileUser& user, const Application& application,
                          std::uint64_t seed, std::size_t index) {
    const BehaviorProfile& b = population.behavior;
    Rng rng(derive_seed(seed, Stream::Report, index));

    const bool dishonest = rng.uniform01() < bad_report_probability(b, user.reputation);
    double payload;
    if (dishonest) {
        payload = rng.uniform(b.payload_low, b.payload_high);
    } else {
        const std::size_t overlap = user.attributes.overlap_count(task.interested_attributes);
        const double sigma = payload_noise_stddev(b, overlap, task.interested_attributes.size());
        payload = std::clamp(b.payload_truth + rng.normal(0.0, sigma), b.payload_low,
                             b.payload_high);
    }
    const double actual_delay = std::max(
        0.0, rng.normal(application.expected_delay,
                        b.delay_noise_frac * application.expected_delay));
    return DrawnReport{SensingReport(user.id, payload, actual_delay), dishonest};
}

CampaignResult run_campaign(const PopulationModel& population, const TaskSpec& task,
                            const ReputationParams& params, SolverKind solver,
                            std::uint64_t seed, const SelectionSettings& settings,
                            ReputationStore* store) {
    population.validate(params);
    if (!(settings.amplification > 0.0))
        throw std::invalid_argument("amplification must be positive");

    std::vector<MobileUser> users;
    std::vector<Application> applications;
    users.reserve(population.n_users);
    applications.reserve(population.n_users);
    for (std::size_t i = 0; i < population.n_users; ++i) {
        SampledUser sampled = sample_user(population, params, seed, i);
        double effective = sampled.user.reputation;
        if (store != nullptr) {
            if (store->entries().count(sampled.user.id) > 0)
                effective = store->reputation(sampled.user.id);
            else
                store->set_reputation(sampled.user.id, effective);
        }
        users.emplace_back(sampled.user.id, sampled.user.attributes, effective, params);
        applications.push_back(sampled.application);
    }

    CampaignResult result;
    result.task_id = task.id;
    result.solver = solver;
    result.seed = seed;
    result.population_size = population.n_users;

    const std::vector<Candidate> candidates =
        filter_candidates(users, applications, task, params, settings.amplification);
    result.candidate_count = candidates.size();

    switch (solver) {
        case SolverKind::ExactDp:
            result.selection = select_exact_dp(candidates, task.budget);
            break;
        case SolverKind::Fptas:
            result.selection = select_fptas(candidates, task.budget, settings.epsilon);
            break;
        case SolverKind::Greedy:
            result.selection = select_greedy_baseline(candidates, task.budget);
            break;
        case SolverKind::Exhaustive:
            result.selection = select_exhaustive(candidates, task.budget);
            break;
    }

    std::unordered_map<UserId, std::size_t> index_of;
    for (std::size_t i = 0; i < users.size(); ++i) index_of.emplace(users[i].id, i);
    std::unordered_map<UserId, const Candidate*> candidate_of;
    for (const auto& c : candidates) candidate_of.emplace(c.user_id, &c);

    std::vector<SensingReport> reports;
    std::vector<bool> dishonest_flags;
    reports.reserve(result.selection.selected.size());
    for (const UserId& id : result.selection.selected) {
        const std::size_t i = index_of.at(id);
        DrawnReport drawn = sample_report(population, task, users[i], applications[i], seed, i);
        reports.push_back(drawn.report);
        dishonest_flags.push_back(drawn.dishonest);
    }

    const std::vector<ReportAssessment> assessments =
        assess_collection(reports, applications, task);
    const std::vector<ReputationDelta> deltas =
        evaluate_reputation_delta(assessments, applications, params);
    if (store != nullptr) store->apply(deltas);

    result.participants.reserve(reports.size());
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const std::size_t i = index_of.at(reports[k].user_id);
        const Candidate& cand = *candidate_of.at(reports[k].user_id);
        ParticipantRecord rec;
        rec.user_id = reports[k].user_id;
        rec.bid_price = applications[i].bid_price;
        rec.expected_delay = applications[i].expected_delay;
        rec.expected_utility = cand.utility;
        rec.amplified = cand.amplified;
        rec.reputation = users[i].reputation;
        rec.payload = reports[k].payload;
        rec.actual_delay = reports[k].actual_delay;
        rec.dishonest = dishonest_flags[k];
        rec.veracity = assessments[k].veracity;
        rec.delay_score = assessments[k].delay_score;
        rec.final_score = assessments[k].final_score;
        rec.valid = assessments[k].valid;
        rec.passed = deltas[k].passed;
        rec.reward = allocate_reward(assessments[k], applications[i], task.assessment).reward;
        rec.reputation_delta = deltas[k].delta;
        rec.reputation_after =
            std::clamp(users[i].reputation + params.update_scale * deltas[k].delta,
                       params.min_reputation, params.max_reputation);

        result.crowdsourcing_utility += rec.final_score;
        result.total_actual_delay += rec.actual_delay;
        result.total_reward += rec.reward;
        if (rec.valid) ++result.valid_reports;
        if (rec.passed) ++result.passed_reports;
        result.participants.push_back(std::move(rec));
    }
    return result;
}

}  // namespace crowdsense
