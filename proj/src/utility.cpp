#include "crowdsense/utility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crowdsense {

ExpectedUtility::ExpectedUtility(double value) : value_(value) {
    if (!(value > 0.0 && value <= 1.0))
        throw std::invalid_argument("expected utility must lie in (0, 1]");
}

double social_attribute_utility(const SocialAttributeSet& user_attributes,
                                const SocialAttributeSet& task_attributes,
                                const UtilityWeights& weights) {
    if (task_attributes.empty())
        throw std::invalid_argument("task attribute set must be non-empty");
    const double ratio = static_cast<double>(user_attributes.overlap_count(task_attributes)) /
                         static_cast<double>(task_attributes.size());
    return (1.0 - weights.social_floor) * ratio + weights.social_floor;
}

double delay_utility(double expected_delay, double delay_threshold,
                     const UtilityWeights& weights) {
    if (!(delay_threshold > 0.0))
        throw std::invalid_argument("delay_threshold must be positive");
    if (!(expected_delay > 0.0 && expected_delay <= delay_threshold))
        throw std::invalid_argument("expected_delay must lie in (0, delay_threshold]");
    // 1 - e^(d - d_t) via expm1 keeps precision when d is close to the threshold.
    const double decay = -std::expm1(expected_delay - delay_threshold);
    return (1.0 - weights.delay_floor) * decay + weights.delay_floor;
}

double reputation_utility(double reputation, const ReputationParams& params,
                          const UtilityWeights& weights) {
    if (!(reputation >= params.min_reputation && reputation <= params.max_reputation))
        throw std::invalid_argument("reputation out of range");
    const double baseline = weights.reputation_baseline;
    if (reputation < params.initial_reputation)
        return baseline * std::exp(reputation - params.initial_reputation);
    const double span = params.max_reputation - params.initial_reputation;
    const double filled = (reputation - params.initial_reputation) / span;
    return baseline + (1.0 - baseline) * std::log1p((std::exp(1.0) - 1.0) * filled);
}

ExpectedUtility expected_utility(const MobileUser& user, const Application& application,
                                 const TaskSpec& task, const ReputationParams& params) {
    const auto& w = task.weights;
    const double f = social_attribute_utility(user.attributes, task.interested_attributes, w);
    const double g = delay_utility(application.expected_delay, task.delay_threshold, w);
    const double h = reputation_utility(user.reputation, params, w);
    const double blend = w.social_weight * f + w.delay_weight * g + w.reputation_weight * h;
    // Each factor tops out at 1, so the blend can only cross 1 by rounding.
    return ExpectedUtility(std::min(blend, 1.0));
}

}  // namespace crowdsense
