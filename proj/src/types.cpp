#include "crowdsense/types.hpp"

#include <cmath>
#include <stdexcept>

#include "crowdsense/warn.hpp"

namespace crowdsense {

namespace {

bool finite(double x) { return std::isfinite(x); }

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

}  // namespace

SocialAttributeSet::SocialAttributeSet(std::set<std::string> attributes)
    : attributes_(std::move(attributes)) {
    for (const auto& a : attributes_) require(!a.empty(), "attribute tags must be non-empty");
}

SocialAttributeSet SocialAttributeSet::from_list(const std::vector<std::string>& attributes) {
    std::set<std::string> items;
    for (const auto& a : attributes) {
        require(!a.empty(), "attribute tags must be non-empty");
        if (!items.insert(a).second)
            throw std::invalid_argument("duplicate attribute tag: " + a);
    }
    return SocialAttributeSet(std::move(items));
}

std::size_t SocialAttributeSet::overlap_count(const SocialAttributeSet& other) const {
    const auto* small = this;
    const auto* large = &other;
    if (small->size() > large->size()) std::swap(small, large);
    std::size_t n = 0;
    for (const auto& a : small->attributes_)
        if (large->contains(a)) ++n;
    return n;
}

ReputationParams::ReputationParams(double min_reputation, double max_reputation,
                                   double initial_reputation, double reward_factor,
                                   double punishment_factor, double quality_threshold)
    : min_reputation(min_reputation),
      max_reputation(max_reputation),
      initial_reputation(initial_reputation),
      reward_factor(reward_factor),
      punishment_factor(punishment_factor),
      quality_threshold(quality_threshold) {
    require(finite(min_reputation) && finite(max_reputation) && finite(initial_reputation),
            "reputation bounds must be finite");
    require(min_reputation > 0.0, "min_reputation must be positive");
    require(max_reputation > min_reputation, "max_reputation must exceed min_reputation");
    require(initial_reputation > min_reputation && initial_reputation < max_reputation,
            "initial_reputation must lie strictly inside the reputation range");
    require(finite(reward_factor) && reward_factor > 0.0, "reward_factor must be positive");
    require(finite(punishment_factor) && punishment_factor >= reward_factor,
            "punishment_factor must be at least reward_factor");
    require(finite(quality_threshold) && quality_threshold > 0.0 && quality_threshold < 1.0,
            "quality_threshold must lie in (0, 1)");
    if (punishment_factor < 10.0 * reward_factor)
        warn("punishment_factor below 10x reward_factor weakens the deterrent");
}

ReputationParams ReputationParams::defaults() {
    return ReputationParams(0.1, 1.0, 0.5, 20.0, 200.0, 0.35);
}

MobileUser::MobileUser(UserId id_in, SocialAttributeSet attributes_in, double reputation_in,
                       const ReputationParams& params)
    : id(std::move(id_in)), attributes(std::move(attributes_in)), reputation(reputation_in) {
    require(!id.empty(), "user id must be non-empty");
    require(finite(reputation), "reputation must be finite");
    require(reputation >= params.min_reputation && reputation <= params.max_reputation,
            "reputation out of range for user " + id);
}

UtilityWeights::UtilityWeights(double social_weight, double delay_weight, double reputation_weight,
                               double social_floor, double delay_floor,
                               double reputation_baseline)
    : social_weight(social_weight),
      delay_weight(delay_weight),
      reputation_weight(reputation_weight),
      social_floor(social_floor),
      delay_floor(delay_floor),
      reputation_baseline(reputation_baseline) {
    require(finite(social_weight) && social_weight >= 0.0, "social_weight must be >= 0");
    require(finite(delay_weight) && delay_weight >= 0.0, "delay_weight must be >= 0");
    require(finite(reputation_weight) && reputation_weight >= 0.0,
            "reputation_weight must be >= 0");
    require(std::abs(social_weight + delay_weight + reputation_weight - 1.0) <= 1e-9,
            "factor weights must sum to 1");
    require(finite(social_floor) && social_floor > 0.0 && social_floor < 1.0,
            "social_floor must lie in (0, 1)");
    require(finite(delay_floor) && delay_floor > 0.0 && delay_floor < 1.0,
            "delay_floor must lie in (0, 1)");
    require(finite(reputation_baseline) && reputation_baseline > 0.0 && reputation_baseline < 1.0,
            "reputation_baseline must lie in (0, 1)");
}

namespace {
UtilityWeights make_weights(double ws, double wd, double wr) {
    return UtilityWeights(ws, wd, wr, 0.2, 0.2, 0.5);
}
}  // namespace

UtilityWeights UtilityWeights::balanced() { return make_weights(1.0 / 3, 1.0 / 3, 1.0 / 3); }
UtilityWeights UtilityWeights::social_heavy() { return make_weights(0.9, 0.05, 0.05); }
UtilityWeights UtilityWeights::delay_heavy() { return make_weights(0.05, 0.9, 0.05); }
UtilityWeights UtilityWeights::reputation_heavy() { return make_weights(0.05, 0.05, 0.9); }

AssessmentParams::AssessmentParams(double veracity_weight, double delay_slack,
                                   double penalty_scale, double delay_shape, double reward_shape,
                                   double quality_threshold)
    : veracity_weight(veracity_weight),
      delay_slack(delay_slack),
      penalty_scale(penalty_scale),
      delay_shape(delay_shape),
      reward_shape(reward_shape),
      quality_threshold(quality_threshold) {
    require(finite(veracity_weight) && veracity_weight >= 0.0 && veracity_weight <= 1.0,
            "veracity_weight must lie in [0, 1]");
    require(finite(delay_slack) && delay_slack >= 0.0, "delay_slack must be >= 0");
    require(finite(penalty_scale) && penalty_scale > 0.0 && penalty_scale <= 1.0,
            "penalty_scale must lie in (0, 1]");
    require(finite(delay_shape) && delay_shape > 0.0, "delay_shape must be positive");
    require(finite(reward_shape) && reward_shape > 0.0, "reward_shape must be positive");
    require(finite(quality_threshold) && quality_threshold > 0.0 && quality_threshold < 1.0,
            "quality_threshold must lie in (0, 1)");
}

AssessmentParams AssessmentParams::defaults() {
    return AssessmentParams(0.6, 0.0, 1.0, 5.0, 2.0, 0.35);
}

TaskSpec::TaskSpec(std::string id_in, SocialAttributeSet interested_attributes_in, double budget_in,
                   double delay_threshold_in, UtilityWeights weights_in,
                   AssessmentParams assessment_in)
    : id(std::move(id_in)),
      interested_attributes(std::move(interested_attributes_in)),
      budget(budget_in),
      delay_threshold(delay_threshold_in),
      weights(weights_in),
      assessment(assessment_in) {
    require(!id.empty(), "task id must be non-empty");
    require(!interested_attributes.empty(), "task must declare at least one interested attribute");
    require(finite(budget) && budget >= 0.0, "budget must be >= 0");
    require(finite(delay_threshold) && delay_threshold > 0.0, "delay_threshold must be positive");
    require(assessment.delay_slack < delay_threshold,
            "delay_slack must be smaller than the delay threshold");
}

Application::Application(UserId user_id_in, double bid_price_in, double expected_delay_in)
    : user_id(std::move(user_id_in)), bid_price(bid_price_in), expected_delay(expected_delay_in) {
    require(!user_id.empty(), "application user id must be non-empty");
    require(finite(bid_price) && bid_price > 0.0, "bid_price must be positive");
    require(finite(expected_delay) && expected_delay > 0.0, "expected_delay must be positive");
}

SensingReport::SensingReport(UserId user_id_in, double payload_in, double actual_delay_in)
    : user_id(std::move(user_id_in)), payload(payload_in), actual_delay(actual_delay_in) {
    require(!user_id.empty(), "report user id must be non-empty");
    require(finite(payload), "payload must be finite");
    require(finite(actual_delay) && actual_delay >= 0.0, "actual_delay must be >= 0");
}

}  // namespace crowdsense
