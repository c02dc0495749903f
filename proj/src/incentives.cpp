#include "crowdsense/incentives.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace crowdsense {

RewardOutcome allocate_reward(const ReportAssessment& assessment, const Application& application,
                              const AssessmentParams& params) {
    if (assessment.user_id != application.user_id)
        throw std::invalid_argument("assessment and application belong to different users");

    RewardOutcome out;
    out.user_id = assessment.user_id;
    if (!assessment.valid) return out;
    if (assessment.final_score >= params.quality_threshold) {
        out.reward = application.bid_price;
        out.full_payment = true;
        return out;
    }
    out.reward = application.bid_price *
                 std::exp((assessment.final_score - params.quality_threshold) * params.reward_shape);
    return out;
}

std::vector<ReputationDelta> evaluate_reputation_delta(
    const std::vector<ReportAssessment>& assessments,
    const std::vector<Application>& applications, const ReputationParams& params) {
    std::unordered_map<UserId, const Application*> by_id;
    for (const auto& app : applications) {
        if (!by_id.emplace(app.user_id, &app).second)
            throw std::invalid_argument("duplicate application from user: " + app.user_id);
    }

    double score_total = 0.0;
    double bid_total = 0.0;
    for (const auto& a : assessments) {
        auto it = by_id.find(a.user_id);
        if (it == by_id.end())
            throw std::invalid_argument("assessment for user without application: " + a.user_id);
        const bool passed = a.valid && a.final_score >= params.quality_threshold;
        if (params.include_failed_in_shares || passed) {
            score_total += a.final_score;
            bid_total += it->second->bid_price;
        }
    }

    std::vector<ReputationDelta> deltas;
    deltas.reserve(assessments.size());
    for (const auto& a : assessments) {
        ReputationDelta d;
        d.user_id = a.user_id;
        d.passed = a.valid && a.final_score >= params.quality_threshold;
        if (!d.passed) {
            d.delta = -params.punishment_factor;
        } else {
            const double score_share = a.final_score / score_total;
            const double bid_share = by_id.at(a.user_id)->bid_price / bid_total;
            d.delta = params.reward_factor * (1.0 - std::exp(-score_share / bid_share));
        }
        deltas.push_back(d);
    }
    return deltas;
}

ReputationStore::ReputationStore(ReputationParams params) : params_(params) {}

double ReputationStore::reputation(const UserId& id) const {
    auto it = reputations_.find(id);
    return it == reputations_.end() ? params_.initial_reputation : it->second;
}

void ReputationStore::set_reputation(const UserId& id, double value) {
    if (id.empty()) throw std::invalid_argument("user id must be non-empty");
    if (!(value >= params_.min_reputation && value <= params_.max_reputation))
        throw std::invalid_argument("reputation out of range for user " + id);
    reputations_[id] = value;
}

void ReputationStore::apply(const std::vector<ReputationDelta>& deltas) {
    for (const auto& d : deltas) {
        const double next = reputation(d.user_id) + params_.update_scale * d.delta;
        reputations_[d.user_id] =
            std::clamp(next, params_.min_reputation, params_.max_reputation);
    }
}

void ReputationStore::save_snapshot(const std::string& path) const {
    nlohmann::json doc;
    doc["params"] = {
        {"min_reputation", params_.min_reputation},
        {"max_reputation", params_.max_reputation},
        {"initial_reputation", params_.initial_reputation},
        {"reward_factor", params_.reward_factor},
        {"punishment_factor", params_.punishment_factor},
        {"quality_threshold", params_.quality_threshold},
        {"update_scale", params_.update_scale},
        {"include_failed_in_shares", params_.include_failed_in_shares},
    };
    doc["reputations"] = reputations_;

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << doc.dump(2) << '\n';
        if (!out.flush()) throw std::runtime_error("failed writing " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("failed to move snapshot into place at " + path);
    }
}

ReputationStore ReputationStore::load_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json doc = nlohmann::json::parse(in);

    const auto& p = doc.at("params");
    ReputationParams params(p.at("min_reputation").get<double>(),
                            p.at("max_reputation").get<double>(),
                            p.at("initial_reputation").get<double>(),
                            p.at("reward_factor").get<double>(),
                            p.at("punishment_factor").get<double>(),
                            p.at("quality_threshold").get<double>());
    params.update_scale = p.at("update_scale").get<double>();
    params.include_failed_in_shares = p.at("include_failed_in_shares").get<bool>();

    ReputationStore store(params);
    for (const auto& [id, value] : doc.at("reputations").items())
        store.set_reputation(id, value.get<double>());
    return store;
}

}  // namespace crowdsense
