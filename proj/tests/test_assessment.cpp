#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "crowdsense/assessment.hpp"
#include "crowdsense/types.hpp"
#include "test_support.hpp"

using namespace crowdsense;
using crowdsense::testing::WarnCapture;

namespace {

TaskSpec sample_task(double delay_threshold = 40.0) {
    return TaskSpec("t", SocialAttributeSet::from_list({"a", "b"}), 600.0, delay_threshold,
                    UtilityWeights::balanced(), AssessmentParams::defaults());
}

}  // namespace

TEST_SUITE("assessment") {

TEST_CASE("scalar linear similarity") {
    CHECK(scalar_linear_similarity(50.0, 50.0, 50.0) == 1.0);
    CHECK(scalar_linear_similarity(50.0, 75.0, 50.0) == 0.0);
    CHECK(scalar_linear_similarity(50.0, 100.0, 50.0) == -1.0);
    CHECK(scalar_linear_similarity(0.0, 100.0, 50.0) == -1.0);  // clamped past the range
    CHECK(scalar_linear_similarity(10.0, 20.0, 50.0) == doctest::Approx(0.6));
    CHECK(scalar_linear_similarity(20.0, 10.0, 50.0) ==
          scalar_linear_similarity(10.0, 20.0, 50.0));
    CHECK_THROWS_AS(scalar_linear_similarity(1.0, 2.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(scalar_linear_similarity(std::nan(""), 2.0, 50.0), std::invalid_argument);
}

TEST_CASE("similarity factory") {
    const auto fn = make_similarity("scalar_linear", 100.0);
    CHECK(fn(50.0, 100.0) == 0.0);  // the bound range is honored
    CHECK_THROWS_AS(make_similarity("cosine", 50.0), std::invalid_argument);
    CHECK_THROWS_AS(make_similarity("scalar_linear", -1.0), std::invalid_argument);
}

TEST_CASE("veracity of a two-report collection") {
    const auto sim = make_similarity("scalar_linear", 50.0);
    std::vector<SensingReport> agree = {SensingReport("u1", 50.0, 10.0),
                                        SensingReport("u2", 50.0, 12.0)};
    CHECK(std::abs(veracity_score(agree, 0, sim, VeracityMode::Clamped) -
                   0.8032653298563167) <= 1e-15);

    std::vector<SensingReport> clash = {SensingReport("u1", 0.0, 10.0),
                                        SensingReport("u2", 100.0, 12.0)};
    CHECK(std::abs(veracity_score(clash, 0, sim, VeracityMode::Clamped) -
                   0.1967346701436833) <= 1e-15);
}

TEST_CASE("veracity with neutral peers") {
    const auto sim = make_similarity("scalar_linear", 50.0);
    // every peer sits exactly half a range away, so each similarity is zero
    std::vector<SensingReport> reports = {
        SensingReport("u1", 50.0, 10.0), SensingReport("u2", 25.0, 10.0),
        SensingReport("u3", 75.0, 10.0), SensingReport("u4", 25.0, 10.0),
        SensingReport("u5", 75.0, 10.0)};
    CHECK(std::abs(veracity_score(reports, 0, sim, VeracityMode::Clamped) - 0.125) <= 1e-15);
}

TEST_CASE("renormalized mode averages peer similarities before mapping") {
    const auto sim = make_similarity("scalar_linear", 50.0);
    std::vector<SensingReport> reports = {SensingReport("u1", 50.0, 10.0),
                                          SensingReport("u2", 50.0, 10.0),
                                          SensingReport("u3", 50.0, 10.0)};
    CHECK(std::abs(veracity_score(reports, 0, sim, VeracityMode::Clamped) -
                   0.6082656552868946) <= 1e-15);
    CHECK(std::abs(veracity_score(reports, 0, sim, VeracityMode::Renormalized) -
                   0.8582656552868946) <= 1e-15);
}

TEST_CASE("veracity clamps instead of going negative") {
    const auto sim = make_similarity("scalar_linear", 50.0);
    std::vector<SensingReport> reports = {
        SensingReport("u1", 0.0, 10.0), SensingReport("u2", 100.0, 10.0),
        SensingReport("u3", 100.0, 10.0), SensingReport("u4", 100.0, 10.0),
        SensingReport("u5", 100.0, 10.0)};
    CHECK(veracity_score(reports, 0, sim, VeracityMode::Clamped) == 0.0);
}

TEST_CASE("veracity is invariant under peer order") {
    const auto sim = make_similarity("scalar_linear", 50.0);
    std::vector<SensingReport> reports = {
        SensingReport("u1", 42.0, 10.0), SensingReport("u2", 55.0, 10.0),
        SensingReport("u3", 13.0, 10.0), SensingReport("u4", 77.0, 10.0)};
    const double baseline = veracity_score(reports, 0, sim, VeracityMode::Clamped);
    std::swap(reports[1], reports[3]);
    CHECK(veracity_score(reports, 0, sim, VeracityMode::Clamped) == baseline);
}

TEST_CASE("single-report collections score neutral with a warning") {
    const auto sim = make_similarity("scalar_linear", 50.0);
    std::vector<SensingReport> reports = {SensingReport("u1", 42.0, 10.0)};
    WarnCapture capture;
    CHECK(veracity_score(reports, 0, sim, VeracityMode::Clamped) == 0.5);
    CHECK(capture.any_contains("single-report"));
    CHECK_THROWS_AS(veracity_score(reports, 1, sim, VeracityMode::Clamped), std::out_of_range);
}

TEST_CASE("delay score plateaus through the grace window") {
    const auto params = AssessmentParams::defaults();
    CHECK(delay_deviation_score(0.0, 20.0, 40.0, params) == 1.0);
    CHECK(delay_deviation_score(10.0, 20.0, 40.0, params) == 1.0);
    CHECK(delay_deviation_score(20.0, 20.0, 40.0, params) == 1.0);

    auto slacked = AssessmentParams::defaults();
    slacked.delay_slack = 5.0;
    CHECK(delay_deviation_score(25.0, 20.0, 40.0, slacked) == 1.0);
    CHECK(delay_deviation_score(25.0 + 1e-6, 20.0, 40.0, slacked) < 1.0);
    CHECK(delay_deviation_score(25.0 + 1e-6, 20.0, 40.0, slacked) ==
          doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("delay score decay spot values") {
    const auto params = AssessmentParams::defaults();
    CHECK(std::abs(delay_deviation_score(30.0, 20.0, 40.0, params) -
                   0.0820849986238988) <= 1e-15);
    CHECK(std::abs(delay_deviation_score(40.0, 20.0, 40.0, params) -
                   0.006737946999085467) <= 1e-15);
}

TEST_CASE("delay score decreases past the grace window") {
    const auto params = AssessmentParams::defaults();
    double prev = 2.0;
    for (double ad = 20.0; ad <= 40.0; ad += 0.5) {
        const double score = delay_deviation_score(ad, 20.0, 40.0, params);
        CHECK(score <= prev);
        CHECK(score > 0.0);
        prev = score;
    }
}

TEST_CASE("penalty scale bounds the delay score from below") {
    auto params = AssessmentParams::defaults();
    params.penalty_scale = 0.4;
    for (double ad : {25.0, 35.0, 40.0, 100.0}) {
        const double score = delay_deviation_score(ad, 20.0, 40.0, params);
        CHECK(score >= 0.6);
        CHECK(score <= 1.0);
    }
}

TEST_CASE("delay score validates its domain") {
    const auto params = AssessmentParams::defaults();
    CHECK_THROWS_AS(delay_deviation_score(-1.0, 20.0, 40.0, params), std::invalid_argument);
    CHECK_THROWS_AS(delay_deviation_score(10.0, 0.0, 40.0, params), std::invalid_argument);
    // the promised delay must leave room before the threshold
    CHECK_THROWS_AS(delay_deviation_score(10.0, 40.0, 40.0, params), std::invalid_argument);
    auto slacked = AssessmentParams::defaults();
    slacked.delay_slack = 20.0;
    CHECK_THROWS_AS(delay_deviation_score(10.0, 20.0, 40.0, slacked), std::invalid_argument);
}

TEST_CASE("assessing a report blends veracity and timeliness") {
    const auto task = sample_task(40.0);
    std::vector<SensingReport> reports = {SensingReport("u1", 50.0, 10.0),
                                          SensingReport("u2", 50.0, 12.0)};
    const Application app("u1", 100.0, 20.0);
    const auto assessment = assess_report(reports, 0, app, task);
    CHECK(assessment.user_id == "u1");
    CHECK(assessment.valid);
    CHECK(assessment.delay_score == 1.0);
    CHECK(std::abs(assessment.veracity - 0.8032653298563167) <= 1e-15);
    CHECK(std::abs(assessment.final_score - 0.88195919791379) <= 1e-14);
}

TEST_CASE("reports past the task threshold are invalid") {
    const auto task = sample_task(40.0);
    std::vector<SensingReport> reports = {SensingReport("u1", 50.0, 41.0),
                                          SensingReport("u2", 50.0, 12.0)};
    const Application app("u1", 100.0, 20.0);
    const auto assessment = assess_report(reports, 0, app, task);
    CHECK_FALSE(assessment.valid);
    CHECK(assessment.delay_score == 0.0);
    CHECK(assessment.final_score == 0.0);
    // the payload corroboration is still on record
    CHECK(assessment.veracity > 0.8);
}

TEST_CASE("assess_report rejects mismatched users") {
    const auto task = sample_task(40.0);
    std::vector<SensingReport> reports = {SensingReport("u1", 50.0, 10.0),
                                          SensingReport("u2", 50.0, 12.0)};
    CHECK_THROWS_AS(assess_report(reports, 0, Application("u2", 100.0, 20.0), task),
                    std::invalid_argument);
}

TEST_CASE("assessing a collection follows report order") {
    const auto task = sample_task(40.0);
    std::vector<Application> apps = {Application("u1", 100.0, 20.0),
                                     Application("u2", 90.0, 15.0),
                                     Application("u3", 80.0, 25.0)};
    std::vector<SensingReport> reports = {SensingReport("u2", 48.0, 14.0),
                                          SensingReport("u1", 52.0, 41.0),
                                          SensingReport("u3", 50.0, 20.0)};
    const auto assessments = assess_collection(reports, apps, task);
    REQUIRE(assessments.size() == 3);
    CHECK(assessments[0].user_id == "u2");
    CHECK(assessments[1].user_id == "u1");
    CHECK(assessments[2].user_id == "u3");
    CHECK(assessments[0].valid);
    CHECK_FALSE(assessments[1].valid);
    CHECK(assessments[2].valid);
}

TEST_CASE("collections validate their wiring") {
    const auto task = sample_task(40.0);
    std::vector<Application> apps = {Application("u1", 100.0, 20.0)};
    std::vector<SensingReport> duplicate = {SensingReport("u1", 50.0, 10.0),
                                            SensingReport("u1", 51.0, 11.0)};
    CHECK_THROWS_AS(assess_collection(duplicate, apps, task), std::invalid_argument);
    std::vector<SensingReport> orphan = {SensingReport("ghost", 50.0, 10.0)};
    CHECK_THROWS_AS(assess_collection(orphan, apps, task), std::invalid_argument);
}

}  // TEST_SUITE
