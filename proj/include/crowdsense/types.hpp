#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace crowdsense {

using UserId = std::string;

// A finite set of opaque attribute tags (interests, locale, ...). Attributes
// compare by equality only; there is no taxonomy or partial match between
// two different tags.
class SocialAttributeSet {
public:
    SocialAttributeSet() = default;
    explicit SocialAttributeSet(std::set<std::string> attributes);

    // Rejects duplicate entries instead of silently deduplicating.
    static SocialAttributeSet from_list(const std::vector<std::string>& attributes);

    bool empty() const { return attributes_.empty(); }
    std::size_t size() const { return attributes_.size(); }
    bool contains(const std::string& attr) const { return attributes_.count(attr) > 0; }
    std::size_t overlap_count(const SocialAttributeSet& other) const;
    const std::set<std::string>& items() const { return attributes_; }

    bool operator==(const SocialAttributeSet&) const = default;

private:
    std::set<std::string> attributes_;
};

// Bounds and update factors of the platform reputation ledger. Values live in
// [min_reputation, max_reputation]; new users start at initial_reputation.
// reward_factor caps the per-task gain, punishment_factor is the flat per-task
// loss for a below-threshold report; punishing must hit harder than rewarding
// pays, so punishment_factor >= reward_factor is enforced (a warning fires
// below a 10x gap).
struct ReputationParams {
    double min_reputation;
    double max_reputation;
    double initial_reputation;
    double reward_factor;
    double punishment_factor;
    double quality_threshold;

    // Scale applied to per-task deltas before integrating them into the
    // stored range (the evaluation scores are orders of magnitude larger
    // than the stored interval).
    double update_scale = 1e-3;

    // Whether participants with invalid (zero-scored) reports stay in the
    // quality/bid share denominators.
    bool include_failed_in_shares = true;

    ReputationParams(double min_reputation, double max_reputation, double initial_reputation,
                     double reward_factor, double punishment_factor, double quality_threshold);

    static ReputationParams defaults();  // [0.1, 1], start 0.5, kappa 20, eta 200, threshold 0.35
};

// A registered platform user.
struct MobileUser {
    UserId id;
    SocialAttributeSet attributes;
    double reputation;

    MobileUser(UserId id, SocialAttributeSet attributes, double reputation,
               const ReputationParams& params);
};

// Weights of the three per-candidate utility factors (attribute overlap,
// expected delay, reputation) plus each factor's default level:
//   social_floor        - overlap utility with zero common attributes
//   delay_floor         - delay utility at the task's delay threshold
//   reputation_baseline - reputation utility at the initial reputation
struct UtilityWeights {
    double social_weight;
    double delay_weight;
    double reputation_weight;
    double social_floor;
    double delay_floor;
    double reputation_baseline;

    UtilityWeights(double social_weight, double delay_weight, double reputation_weight,
                   double social_floor, double delay_floor, double reputation_baseline);

    static UtilityWeights balanced();          // (1/3, 1/3, 1/3)
    static UtilityWeights social_heavy();      // (0.9, 0.05, 0.05)
    static UtilityWeights delay_heavy();       // (0.05, 0.9, 0.05)
    static UtilityWeights reputation_heavy();  // (0.05, 0.05, 0.9)
};

enum class VeracityMode {
    Clamped,       // formula applied verbatim, result clamped into [0, 1]
    Renormalized,  // similarity sum averaged over peers before the affine map
};

// Knobs of the report quality assessment.
//   veracity_weight   - weight of the veracity score vs the delay score
//   delay_slack       - grace period past the expected delay before penalties
//   penalty_scale     - depth of the delay penalty, in (0, 1]
//   delay_shape       - exponent gain of the delay penalty curve
//   reward_shape      - exponent gain of the below-threshold reward discount
//   quality_threshold - final-score cutoff for full payment
struct AssessmentParams {
    double veracity_weight;
    double delay_slack;
    double penalty_scale;
    double delay_shape;
    double reward_shape;
    double quality_threshold;

    VeracityMode veracity_mode = VeracityMode::Clamped;
    std::string similarity = "scalar_linear";
    double similarity_range = 50.0;

    AssessmentParams(double veracity_weight, double delay_slack, double penalty_scale,
                     double delay_shape, double reward_shape, double quality_threshold);

    static AssessmentParams defaults();  // (0.6, 0, 1, 5, 2, 0.35)
};

// A published sensing task. The interested-attribute set must be non-empty
// (the overlap utility divides by its size). A zero budget is legal and
// degenerates to an empty selection.
struct TaskSpec {
    std::string id;
    SocialAttributeSet interested_attributes;
    double budget;
    double delay_threshold;
    UtilityWeights weights;
    AssessmentParams assessment;

    TaskSpec(std::string id, SocialAttributeSet interested_attributes, double budget,
             double delay_threshold, UtilityWeights weights, AssessmentParams assessment);
};

// One user's bid for one task.
struct Application {
    UserId user_id;
    double bid_price;
    double expected_delay;

    Application(UserId user_id, double bid_price, double expected_delay);
};

// A submitted report: an opaque scalar payload plus the realized delay.
struct SensingReport {
    UserId user_id;
    double payload;
    double actual_delay;

    SensingReport(UserId user_id, double payload, double actual_delay);
};

// Scores attached to one submitted report. A report that missed the task
// delay threshold is invalid and its final score is forced to zero.
struct ReportAssessment {
    UserId user_id;
    double veracity = 0.0;
    double delay_score = 0.0;
    double final_score = 0.0;
    bool valid = false;
};

}  // namespace crowdsense
