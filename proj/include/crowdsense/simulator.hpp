#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crowdsense/incentives.hpp"
#include "crowdsense/selection.hpp"
#include "crowdsense/types.hpp"

namespace crowdsense {

enum class ReputationDistribution { Uniform, Normal };

// How sampled users behave once selected. A user files a bad report with
// probability (1 - rp) when its reputation rp sits below dishonest_threshold
// and dishonest_scale * (1 - rp) otherwise. Honest payloads cluster around
// the ground truth with noise that grows as the user's attribute overlap
// with the task shrinks; bad payloads are uniform over the payload range.
struct BehaviorProfile {
    double dishonest_threshold = 0.3;
    double dishonest_scale = 0.4;
    double payload_low = 0.0;
    double payload_high = 100.0;
    double payload_truth = 50.0;
    double payload_noise_frac = 0.02;     // honest noise floor, fraction of the payload range
    double mismatch_noise_frac = 0.4;     // extra noise at zero overlap, fraction of the range
    double full_fidelity_overlap = 0.5;   // overlap share (of task attrs) for floor-level noise
    double delay_noise_frac = 0.1;        // actual-delay stddev as a fraction of the promise
};

struct PopulationModel {
    std::size_t n_users = 20;
    std::size_t attribute_universe = 30;
    std::size_t attrs_per_user = 10;
    std::size_t task_attrs = 10;
    double bid_low = 50.0;
    double bid_high = 150.0;
    double delay_low = 1.0;
    double delay_high = 45.0;
    ReputationDistribution reputation_distribution = ReputationDistribution::Normal;
    double reputation_mean = 0.55;
    double reputation_stddev = 0.15;
    BehaviorProfile behavior;

    void validate(const ReputationParams& params) const;
};

// Task parameters without the attribute set; instantiate() samples the
// attributes from the population's universe unless they are pinned.
struct TaskTemplate {
    std::string id = "task";
    double budget = 600.0;
    double delay_threshold = 45.0;
    UtilityWeights weights = UtilityWeights::balanced();
    AssessmentParams assessment = AssessmentParams::defaults();
    std::optional<SocialAttributeSet> attributes;

    TaskSpec instantiate(const PopulationModel& population, std::uint64_t seed) const;
};

struct SelectionSettings {
    double amplification = 1e4;
    double epsilon = 0.1;  // FPTAS only
};

struct SampledUser {
    MobileUser user;
    Application application;
};

double bad_report_probability(const BehaviorProfile& behavior, double reputation);

// Honest-payload noise stddev for a given attribute overlap with the task.
double payload_noise_stddev(const BehaviorProfile& behavior, std::size_t overlap,
                            std::size_t task_attrs);

// User `index` of the population under `seed`. Each user draws from its own
// substream, so user k is identical in every population of size > k sampled
// from the same seed.
SampledUser sample_user(const PopulationModel& population, const ReputationParams& params,
                        std::uint64_t seed, std::size_t index);

struct DrawnReport {
    SensingReport report;
    bool dishonest;
};

// The report user `index` submits if selected. Report substreams are
// disjoint from user substreams, so the same user files the same report no
// matter which solver picked it.
DrawnReport sample_report(const PopulationModel& population, const TaskSpec& task,
                          const MobileUser& user, const Application& application,
                          std::uint64_t seed, std::size_t index);

struct ParticipantRecord {
    UserId user_id;
    double bid_price = 0.0;
    double expected_delay = 0.0;
    double expected_utility = 0.0;
    std::int64_t amplified = 0;
    double reputation = 0.0;  // effective value used at selection time
    double payload = 0.0;
    double actual_delay = 0.0;
    bool dishonest = false;
    double veracity = 0.0;
    double delay_score = 0.0;
    double final_score = 0.0;
    bool valid = false;
    bool passed = false;
    double reward = 0.0;
    double reputation_delta = 0.0;  // raw, before update scaling
    double reputation_after = 0.0;
};

struct CampaignResult {
    std::string task_id;
    SolverKind solver = SolverKind::ExactDp;
    std::uint64_t seed = 0;
    std::size_t population_size = 0;
    std::size_t candidate_count = 0;
    SelectionResult selection;
    std::vector<ParticipantRecord> participants;
    double crowdsourcing_utility = 0.0;  // sum of final scores over submitted reports
    double total_actual_delay = 0.0;
    double total_reward = 0.0;
    std::size_t valid_reports = 0;
    std::size_t passed_reports = 0;
};

// One full campaign: sample the population, collect applications, select
// under the budget, sample the selected users' reports, assess, pay, and
// update reputations. Deterministic given (population, task, solver, seed).
// When a store is supplied it overrides the sampled reputation for users it
// already knows and absorbs the reputation deltas at the end.
CampaignResult run_campaign(const PopulationModel& population, const TaskSpec& task,
                            const ReputationParams& params, SolverKind solver,
                            std::uint64_t seed, const SelectionSettings& settings,
                            ReputationStore* store = nullptr);

}  // namespace crowdsense
