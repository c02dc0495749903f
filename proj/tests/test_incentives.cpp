#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "crowdsense/incentives.hpp"
#include "crowdsense/rng.hpp"
#include "crowdsense/types.hpp"

using namespace crowdsense;

namespace {

ReportAssessment make_assessment(std::string id, double final_score, bool valid = true) {
    ReportAssessment a;
    a.user_id = std::move(id);
    a.final_score = final_score;
    a.veracity = final_score;
    a.delay_score = valid ? 1.0 : 0.0;
    a.valid = valid;
    return a;
}

}  // namespace

TEST_SUITE("incentives") {

TEST_CASE("full payment at and above the quality threshold") {
    const auto params = AssessmentParams::defaults();
    const Application app("u1", 1000.0, 20.0);
    for (double score : {0.35, 0.5, 0.8, 1.0}) {
        const auto outcome = allocate_reward(make_assessment("u1", score), app, params);
        CHECK(outcome.reward == 1000.0);
        CHECK(outcome.full_payment);
    }
}

TEST_CASE("discounted payment below the threshold") {
    const auto params = AssessmentParams::defaults();
    const Application app("u1", 1000.0, 20.0);
    const auto outcome = allocate_reward(make_assessment("u1", 0.15), app, params);
    CHECK(std::abs(outcome.reward - 670.3200460356393) <= 1e-9);
    CHECK_FALSE(outcome.full_payment);
}

TEST_CASE("invalid reports earn nothing") {
    const auto params = AssessmentParams::defaults();
    const Application app("u1", 1000.0, 20.0);
    const auto outcome = allocate_reward(make_assessment("u1", 0.0, false), app, params);
    CHECK(outcome.reward == 0.0);
    CHECK_FALSE(outcome.full_payment);
}

TEST_CASE("reward is non-decreasing in the quality score") {
    const auto params = AssessmentParams::defaults();
    const Application app("u1", 1000.0, 20.0);
    double prev = -1.0;
    for (double score = 0.0; score <= 1.0 + 1e-9; score += 0.01) {
        const auto outcome = allocate_reward(make_assessment("u1", score), app, params);
        CHECK(outcome.reward >= prev);
        CHECK(outcome.reward <= 1000.0);
        prev = outcome.reward;
    }
}

TEST_CASE("reward allocation rejects mismatched users") {
    const auto params = AssessmentParams::defaults();
    CHECK_THROWS_AS(
        allocate_reward(make_assessment("u1", 0.5), Application("u2", 1000.0, 20.0), params),
        std::invalid_argument);
}

TEST_CASE("a lone passing participant gains the full-ratio reward") {
    const auto params = ReputationParams::defaults();
    std::vector<Application> apps = {Application("u1", 100.0, 20.0)};
    const auto deltas =
        evaluate_reputation_delta({make_assessment("u1", 0.8)}, apps, params);
    REQUIRE(deltas.size() == 1);
    CHECK(deltas[0].passed);
    // quality share equals bid share, so the gain is kappa * (1 - e^-1)
    CHECK(std::abs(deltas[0].delta - 12.642411176571153) <= 1e-12);
}

TEST_CASE("failing or invalid participants take the flat punishment") {
    const auto params = ReputationParams::defaults();
    std::vector<Application> apps = {Application("u1", 100.0, 20.0),
                                     Application("u2", 100.0, 20.0)};
    const auto deltas = evaluate_reputation_delta(
        {make_assessment("u1", 0.3499), make_assessment("u2", 0.0, false)}, apps, params);
    REQUIRE(deltas.size() == 2);
    CHECK_FALSE(deltas[0].passed);
    CHECK(deltas[0].delta == -200.0);
    CHECK_FALSE(deltas[1].passed);
    CHECK(deltas[1].delta == -200.0);
}

TEST_CASE("passing exactly at the threshold counts as a pass") {
    const auto params = ReputationParams::defaults();
    std::vector<Application> apps = {Application("u1", 100.0, 20.0)};
    const auto deltas =
        evaluate_reputation_delta({make_assessment("u1", 0.35)}, apps, params);
    CHECK(deltas[0].passed);
    CHECK(deltas[0].delta > 0.0);
}

TEST_CASE("gain grows with the quality share") {
    const auto params = ReputationParams::defaults();
    std::vector<Application> apps = {Application("u1", 100.0, 20.0),
                                     Application("u2", 100.0, 20.0)};
    // equal bids, 60/40 quality split: u1's ratio is 0.6 / 0.5
    const auto deltas = evaluate_reputation_delta(
        {make_assessment("u1", 0.6), make_assessment("u2", 0.4)}, apps, params);
    CHECK(std::abs(deltas[0].delta - 13.976115761755956) <= 1e-12);
    CHECK(deltas[0].delta > deltas[1].delta);

    double prev = -1.0;
    for (double share : {0.50, 0.55, 0.60, 0.65, 0.70}) {
        const auto d = evaluate_reputation_delta(
            {make_assessment("u1", share), make_assessment("u2", 1.0 - share)}, apps, params);
        CHECK(d[0].delta >= prev);
        prev = d[0].delta;
    }
}

TEST_CASE("gain shrinks as the bid share grows") {
    const auto params = ReputationParams::defaults();
    double prev = 1e9;
    for (double bid : {50.0, 100.0, 150.0, 200.0}) {
        std::vector<Application> apps = {Application("u1", bid, 20.0),
                                         Application("u2", 100.0, 20.0)};
        const auto deltas = evaluate_reputation_delta(
            {make_assessment("u1", 0.5), make_assessment("u2", 0.5)}, apps, params);
        CHECK(deltas[0].delta < prev);
        CHECK(deltas[0].delta > 0.0);
        prev = deltas[0].delta;
    }
}

TEST_CASE("failed participants can be excluded from the share denominators") {
    auto params = ReputationParams::defaults();
    std::vector<Application> apps = {Application("u1", 100.0, 20.0),
                                     Application("u2", 100.0, 20.0)};
    const std::vector<ReportAssessment> assessments = {make_assessment("u1", 0.8),
                                                       make_assessment("u2", 0.1)};

    const auto shared = evaluate_reputation_delta(assessments, apps, params);
    params.include_failed_in_shares = false;
    const auto alone = evaluate_reputation_delta(assessments, apps, params);

    // with the failed peer out of the denominators u1 holds both full shares
    CHECK(std::abs(alone[0].delta - 12.642411176571153) <= 1e-12);
    CHECK(shared[0].delta > alone[0].delta);
    CHECK(alone[1].delta == -200.0);
}

TEST_CASE("deltas require a matching application") {
    const auto params = ReputationParams::defaults();
    std::vector<Application> apps = {Application("u1", 100.0, 20.0)};
    CHECK_THROWS_AS(evaluate_reputation_delta({make_assessment("ghost", 0.5)}, apps, params),
                    std::invalid_argument);
    std::vector<Application> dup = {Application("u1", 100.0, 20.0),
                                    Application("u1", 90.0, 20.0)};
    CHECK_THROWS_AS(evaluate_reputation_delta({make_assessment("u1", 0.5)}, dup, params),
                    std::invalid_argument);
}

TEST_CASE("store reads unknown users at the initial reputation") {
    ReputationStore store(ReputationParams::defaults());
    CHECK(store.reputation("stranger") == 0.5);
    CHECK(store.size() == 0);
    store.set_reputation("u1", 0.8);
    CHECK(store.reputation("u1") == 0.8);
    CHECK(store.size() == 1);
    CHECK_THROWS_AS(store.set_reputation("u1", 1.5), std::invalid_argument);
    CHECK_THROWS_AS(store.set_reputation("", 0.5), std::invalid_argument);
}

TEST_CASE("applied deltas are scaled and clamped") {
    ReputationStore store(ReputationParams::defaults());
    store.set_reputation("u1", 0.5);

    ReputationDelta gain{"u1", 20.0, true};
    store.apply({gain});
    CHECK(store.reputation("u1") == doctest::Approx(0.52));

    ReputationDelta crush{"u1", -200.0, false};
    store.apply({crush, crush, crush});
    CHECK(store.reputation("u1") == doctest::Approx(0.1));  // floor reached and held
    store.apply({crush});
    CHECK(store.reputation("u1") == 0.1);

    ReputationDelta huge{"u1", 1e6, true};
    store.apply({huge});
    CHECK(store.reputation("u1") == 1.0);  // ceiling
}

TEST_CASE("random update storms never leave the stored range") {
    const auto params = ReputationParams::defaults();
    ReputationStore store(params);
    Rng rng(60601);
    for (int i = 0; i < 10000; ++i) {
        ReputationDelta d;
        d.user_id = "u" + std::to_string(i % 7);
        d.delta = rng.uniform(-400.0, 100.0);
        d.passed = d.delta > 0.0;
        store.apply({d});
        const double value = store.reputation(d.user_id);
        CHECK(value >= params.min_reputation);
        CHECK(value <= params.max_reputation);
    }
}

TEST_CASE("snapshots round-trip through disk") {
    const auto path =
        (std::filesystem::temp_directory_path() / "crowdsense_store_roundtrip.json").string();

    ReputationStore store(ReputationParams::defaults());
    store.set_reputation("u1", 0.815);
    store.set_reputation("u2", 0.1);
    store.save_snapshot(path);
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));

    const auto loaded = ReputationStore::load_snapshot(path);
    CHECK(loaded.params().punishment_factor == 200.0);
    CHECK(loaded.params().include_failed_in_shares);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded.reputation("u1") == 0.815);
    CHECK(loaded.reputation("u2") == 0.1);

    std::filesystem::remove(path);
    CHECK_THROWS_AS(ReputationStore::load_snapshot(path), std::runtime_error);
}

}  // TEST_SUITE
