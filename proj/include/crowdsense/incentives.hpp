#pragma once

#include <map>
#include <string>
#include <vector>

#include "crowdsense/types.hpp"

namespace crowdsense {

struct RewardOutcome {
    UserId user_id;
    double reward = 0.0;
    bool full_payment = false;
};

// Signed per-task reputation movement before scaling into the stored range.
struct ReputationDelta {
    UserId user_id;
    double delta = 0.0;
    bool passed = false;
};

// Pays the full bid when the report clears the quality threshold, an
// exponentially discounted fraction of it below, and nothing for an invalid
// report.
RewardOutcome allocate_reward(const ReportAssessment& assessment, const Application& application,
                              const AssessmentParams& params);

// Reputation movement for every assessed participant of one task. Passing
// participants gain by how much their quality share exceeds their bid share;
// everyone else takes the flat punishment.
std::vector<ReputationDelta> evaluate_reputation_delta(
    const std::vector<ReportAssessment>& assessments,
    const std::vector<Application>& applications, const ReputationParams& params);

// Persistent user -> reputation map. Unknown users read as the configured
// initial reputation; updates are scaled deltas clamped into the stored range.
class ReputationStore {
public:
    explicit ReputationStore(ReputationParams params);

    const ReputationParams& params() const { return params_; }
    double reputation(const UserId& id) const;
    void set_reputation(const UserId& id, double value);
    std::size_t size() const { return reputations_.size(); }
    const std::map<UserId, double>& entries() const { return reputations_; }

    void apply(const std::vector<ReputationDelta>& deltas);

    // Writes to a temp file in the target directory, then renames over the
    // destination, so a crash cannot leave a half-written snapshot.
    void save_snapshot(const std::string& path) const;
    static ReputationStore load_snapshot(const std::string& path);

private:
    ReputationParams params_;
    std::map<UserId, double> reputations_;
};

}  // namespace crowdsense
