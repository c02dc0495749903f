#pragma once

#include "crowdsense/types.hpp"

namespace crowdsense {

// Expected sensing quality of one candidate for one task, always in (0, 1].
// The wrapper exists so downstream code cannot accidentally feed an
// unvalidated double into the selection solvers.
class ExpectedUtility {
public:
    explicit ExpectedUtility(double value);
    double value() const { return value_; }

private:
    double value_;
};

// Attribute overlap utility: rises linearly from the configured floor at zero
// overlap to 1 when the candidate covers every interested attribute.
double social_attribute_utility(const SocialAttributeSet& user_attributes,
                                const SocialAttributeSet& task_attributes,
                                const UtilityWeights& weights);

// Delay utility: 1 as the promised delay approaches zero, decaying to the
// configured floor at the task threshold. Delays beyond the threshold are
// rejected upstream, not here.
double delay_utility(double expected_delay, double delay_threshold,
                     const UtilityWeights& weights);

// Reputation utility: the baseline at the initial reputation, growing
// logarithmically to 1 at the maximum; below the initial reputation it decays
// exponentially toward zero so a damaged record is hard to hide.
double reputation_utility(double reputation, const ReputationParams& params,
                          const UtilityWeights& weights);

// Weighted blend of the three factors above.
ExpectedUtility expected_utility(const MobileUser& user, const Application& application,
                                 const TaskSpec& task, const ReputationParams& params);

}  // namespace crowdsense
