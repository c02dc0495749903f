#include "crowdsense/assessment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "crowdsense/warn.hpp"

namespace crowdsense {

double scalar_linear_similarity(double a, double b, double range) {
    if (!(std::isfinite(range) && range > 0.0))
        throw std::invalid_argument("similarity range must be positive");
    if (!(std::isfinite(a) && std::isfinite(b)))
        throw std::invalid_argument("payloads must be finite");
    return std::clamp(1.0 - 2.0 * std::abs(a - b) / range, -1.0, 1.0);
}

SimilarityFn make_similarity(const std::string& name, double range) {
    if (name == "scalar_linear") {
        if (!(std::isfinite(range) && range > 0.0))
            throw std::invalid_argument("similarity range must be positive");
        return [range](double a, double b) { return scalar_linear_similarity(a, b, range); };
    }
    throw std::invalid_argument("unknown similarity: " + name);
}

double veracity_score(const std::vector<SensingReport>& reports, std::size_t index,
                      const SimilarityFn& similarity, VeracityMode mode) {
    if (index >= reports.size()) throw std::out_of_range("report index out of range");
    const std::size_t count = reports.size();
    if (count == 1) {
        warn("single-report collection; veracity defaults to 0.5");
        return 0.5;
    }

    const double discount = std::exp(-1.0 / static_cast<double>(count));
    double sum = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        if (j == index) continue;
        sum += similarity(reports[index].payload, reports[j].payload) * discount;
    }

    const double peers = static_cast<double>(count - 1);
    if (mode == VeracityMode::Renormalized) return (1.0 + sum / peers) / 2.0;
    return std::clamp((1.0 + sum) / (2.0 * peers), 0.0, 1.0);
}

double delay_deviation_score(double actual_delay, double expected_delay, double delay_threshold,
                             const AssessmentParams& params) {
    if (!(std::isfinite(actual_delay) && actual_delay >= 0.0))
        throw std::invalid_argument("actual_delay must be >= 0");
    if (!(expected_delay > 0.0 && expected_delay < delay_threshold))
        throw std::invalid_argument("expected_delay must lie in (0, delay_threshold)");
    const double grace_end = expected_delay + params.delay_slack;
    if (grace_end >= delay_threshold)
        throw std::invalid_argument("delay_slack leaves no room before the delay threshold");
    if (actual_delay <= grace_end) return 1.0;
    const double exponent =
        (grace_end - actual_delay) / (delay_threshold - grace_end) * params.delay_shape;
    return 1.0 - params.penalty_scale * (1.0 - std::exp(exponent));
}

ReportAssessment assess_report(const std::vector<SensingReport>& reports, std::size_t index,
                               const Application& application, const TaskSpec& task) {
    if (index >= reports.size()) throw std::out_of_range("report index out of range");
    const SensingReport& report = reports[index];
    if (report.user_id != application.user_id)
        throw std::invalid_argument("report and application belong to different users");

    const AssessmentParams& ap = task.assessment;
    const SimilarityFn similarity = make_similarity(ap.similarity, ap.similarity_range);

    ReportAssessment out;
    out.user_id = report.user_id;
    out.veracity = veracity_score(reports, index, similarity, ap.veracity_mode);
    if (report.actual_delay > task.delay_threshold) {
        out.valid = false;
        return out;
    }
    out.valid = true;
    out.delay_score = delay_deviation_score(report.actual_delay, application.expected_delay,
                                            task.delay_threshold, ap);
    out.final_score =
        ap.veracity_weight * out.veracity + (1.0 - ap.veracity_weight) * out.delay_score;
    return out;
}

std::vector<ReportAssessment> assess_collection(const std::vector<SensingReport>& reports,
                                                const std::vector<Application>& applications,
                                                const TaskSpec& task) {
    std::unordered_map<UserId, const Application*> by_id;
    for (const auto& app : applications) {
        if (!by_id.emplace(app.user_id, &app).second)
            throw std::invalid_argument("duplicate application from user: " + app.user_id);
    }

    std::unordered_map<UserId, bool> seen;
    std::vector<ReportAssessment> out;
    out.reserve(reports.size());
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (!seen.emplace(reports[i].user_id, true).second)
            throw std::invalid_argument("duplicate report from user: " + reports[i].user_id);
        auto it = by_id.find(reports[i].user_id);
        if (it == by_id.end())
            throw std::invalid_argument("report from user without application: " +
                                        reports[i].user_id);
        out.push_back(assess_report(reports, i, *it->second, task));
    }
    return out;
}

}  // namespace crowdsense
