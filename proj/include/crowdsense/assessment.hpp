#pragma once

#include <functional>
#include <string>
#include <vector>

#include "crowdsense/types.hpp"

namespace crowdsense {

// Pairwise payload similarity in [-1, 1]: 1 for identical readings, -1 for
// maximally contradictory ones.
using SimilarityFn = std::function<double(double, double)>;

// Linear falloff: 1 at zero distance, 0 at range / 2, floored at -1 beyond
// the full range.
double scalar_linear_similarity(double a, double b, double range);

// Looks up a similarity by configuration name ("scalar_linear" is the only
// built-in) and binds its range.
SimilarityFn make_similarity(const std::string& name, double range);

// Corroboration score of report `index` against every other report in the
// collection. Peer similarities are discounted by e^(-1 / |C|) so small
// collections count for less. A single-report collection has no evidence
// either way and scores 0.5 with a warning.
double veracity_score(const std::vector<SensingReport>& reports, std::size_t index,
                      const SimilarityFn& similarity, VeracityMode mode);

// Timeliness score: 1 while the report arrives within the promised delay plus
// the grace period, then an exponential fall toward 1 - penalty_scale at the
// task threshold and beyond.
double delay_deviation_score(double actual_delay, double expected_delay, double delay_threshold,
                             const AssessmentParams& params);

// Combined quality score of one report inside its collection. Reports that
// arrive after the task threshold are invalid and score zero regardless of
// their payload.
ReportAssessment assess_report(const std::vector<SensingReport>& reports, std::size_t index,
                               const Application& application, const TaskSpec& task);

// Scores a whole collection, matching reports to applications by user id.
// Output order follows the report order.
std::vector<ReportAssessment> assess_collection(const std::vector<SensingReport>& reports,
                                                const std::vector<Application>& applications,
                                                const TaskSpec& task);

}  // namespace crowdsense
