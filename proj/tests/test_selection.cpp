#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "crowdsense/rng.hpp"
#include "crowdsense/selection.hpp"
#include "crowdsense/types.hpp"
#include "test_support.hpp"

using namespace crowdsense;
using crowdsense::testing::random_budget;
using crowdsense::testing::random_instance;
using crowdsense::testing::WarnCapture;

namespace {

Candidate make_candidate(std::string id, double bid, std::int64_t amplified) {
    Candidate c;
    c.user_id = std::move(id);
    c.bid_price = bid;
    c.expected_delay = 10.0;
    c.amplified = amplified;
    c.utility = static_cast<double>(amplified) / 1e4;
    return c;
}

// Reference instance used across solver tests: values 60/100/120, bids 4/5/6.
// With budget 10 the optimum is {c1, c3} at value 180 and cost 10; the greedy
// cheapest-first packing instead takes {c1, c2} at value 160 and cost 9.
std::vector<Candidate> reference_instance() {
    return {make_candidate("c1", 4.0, 60), make_candidate("c2", 5.0, 100),
            make_candidate("c3", 6.0, 120)};
}

double sum_bids(const std::vector<Candidate>& candidates,
                const std::vector<UserId>& selected) {
    double total = 0.0;
    for (const auto& id : selected) {
        const auto it = std::find_if(candidates.begin(), candidates.end(),
                                     [&](const Candidate& c) { return c.user_id == id; });
        REQUIRE(it != candidates.end());
        total += it->bid_price;
    }
    return total;
}

std::int64_t sum_amplified(const std::vector<Candidate>& candidates,
                           const std::vector<UserId>& selected) {
    std::int64_t total = 0;
    for (const auto& id : selected) {
        const auto it = std::find_if(candidates.begin(), candidates.end(),
                                     [&](const Candidate& c) { return c.user_id == id; });
        REQUIRE(it != candidates.end());
        total += it->amplified;
    }
    return total;
}

}  // namespace

TEST_SUITE("selection") {

TEST_CASE("solver names round-trip") {
    for (auto kind : {SolverKind::ExactDp, SolverKind::Fptas, SolverKind::Greedy,
                      SolverKind::Exhaustive}) {
        CHECK(solver_from_name(solver_name(kind)) == kind);
    }
    CHECK(solver_name(SolverKind::ExactDp) == "exact_dp");
    CHECK(solver_name(SolverKind::Fptas) == "fptas");
    CHECK(solver_name(SolverKind::Greedy) == "greedy");
    CHECK(solver_name(SolverKind::Exhaustive) == "exhaustive");
    CHECK_THROWS_AS(solver_from_name("simplex"), std::invalid_argument);
}

TEST_CASE("filter_candidates joins, scores, and filters applications") {
    const auto params = ReputationParams::defaults();
    const auto attrs = SocialAttributeSet::from_list({"a", "b", "c", "d"});
    TaskSpec task("t", attrs, 600.0, 45.0, UtilityWeights::balanced(),
                  AssessmentParams::defaults());
    std::vector<MobileUser> users;
    users.emplace_back("u1", SocialAttributeSet::from_list({"a", "b"}), 0.5, params);
    users.emplace_back("u2", SocialAttributeSet::from_list({"c"}), 0.8, params);
    users.emplace_back("u3", SocialAttributeSet::from_list({"x"}), 0.3, params);

    SUBCASE("late promises are dropped, the rest are scored") {
        std::vector<Application> apps = {Application("u1", 100.0, 20.0),
                                         Application("u2", 120.0, 50.0),
                                         Application("u3", 90.0, 30.0)};
        const auto candidates = filter_candidates(users, apps, task, params);
        REQUIRE(candidates.size() == 2);
        CHECK(candidates[0].user_id == "u1");
        CHECK(candidates[1].user_id == "u3");
        CHECK(candidates[0].bid_price == 100.0);
        CHECK(candidates[0].amplified ==
              static_cast<std::int64_t>(std::floor(candidates[0].utility * 1e4)));
        CHECK(candidates[0].utility > candidates[1].utility);
    }

    SUBCASE("unknown applicants are rejected") {
        std::vector<Application> apps = {Application("ghost", 100.0, 20.0)};
        CHECK_THROWS_AS(filter_candidates(users, apps, task, params), std::invalid_argument);
    }

    SUBCASE("duplicate applications are rejected") {
        std::vector<Application> apps = {Application("u1", 100.0, 20.0),
                                         Application("u1", 90.0, 25.0)};
        CHECK_THROWS_AS(filter_candidates(users, apps, task, params), std::invalid_argument);
    }

    SUBCASE("amplification scales the integer weight") {
        std::vector<Application> apps = {Application("u1", 100.0, 20.0)};
        const auto coarse = filter_candidates(users, apps, task, params, 100.0);
        const auto fine = filter_candidates(users, apps, task, params, 1e6);
        CHECK(coarse[0].amplified ==
              static_cast<std::int64_t>(std::floor(coarse[0].utility * 100.0)));
        CHECK(fine[0].amplified ==
              static_cast<std::int64_t>(std::floor(fine[0].utility * 1e6)));
    }
}

TEST_CASE("exact dp solves the reference instance") {
    const auto candidates = reference_instance();
    const auto result = select_exact_dp(candidates, 10.0);
    CHECK(result.achieved_amplified == 180);
    CHECK(result.total_bid == 10.0);
    REQUIRE(result.selected.size() == 2);
    CHECK(result.selected[0] == "c1");
    CHECK(result.selected[1] == "c3");
    CHECK(result.solver == SolverKind::ExactDp);
    // one dp row per candidate plus the empty row, one column per reachable value
    CHECK(result.table_cells == 4u * 281u);
}

TEST_CASE("greedy packs cheapest bids first on the reference instance") {
    const auto result = select_greedy_baseline(reference_instance(), 10.0);
    CHECK(result.achieved_amplified == 160);
    CHECK(result.total_bid == 9.0);
    REQUIRE(result.selected.size() == 2);
    CHECK(result.selected[0] == "c1");
    CHECK(result.selected[1] == "c2");
    CHECK(result.table_cells == 0);
}

TEST_CASE("exhaustive agrees with the dp on the reference instance") {
    const auto result = select_exhaustive(reference_instance(), 10.0);
    CHECK(result.achieved_amplified == 180);
    CHECK(result.total_bid == 10.0);
    REQUIRE(result.selected.size() == 2);
    CHECK(result.selected[0] == "c1");
    CHECK(result.selected[1] == "c3");
}

TEST_CASE("degenerate budgets and inputs") {
    const auto candidates = reference_instance();
    for (auto solve : {select_exact_dp, select_greedy_baseline, select_exhaustive}) {
        const auto zero = solve(candidates, 0.0);
        CHECK(zero.selected.empty());
        CHECK(zero.total_bid == 0.0);
        CHECK(zero.achieved_amplified == 0);

        const auto none = solve({}, 100.0);
        CHECK(none.selected.empty());
        CHECK(none.achieved_amplified == 0);
    }
    CHECK(select_fptas(candidates, 0.0, 0.1).selected.empty());
    CHECK_THROWS_AS(select_exact_dp(candidates, -1.0), std::invalid_argument);
}

TEST_CASE("solvers reject malformed candidate lists") {
    auto dup = reference_instance();
    dup.push_back(make_candidate("c1", 3.0, 50));
    CHECK_THROWS_AS(select_exact_dp(dup, 10.0), std::invalid_argument);

    auto bad_bid = reference_instance();
    bad_bid[0].bid_price = 0.0;
    CHECK_THROWS_AS(select_exact_dp(bad_bid, 10.0), std::invalid_argument);

    auto bad_value = reference_instance();
    bad_value[0].amplified = -1;
    CHECK_THROWS_AS(select_exact_dp(bad_value, 10.0), std::invalid_argument);
}

TEST_CASE("all-zero amplified utilities warn and select nothing") {
    std::vector<Candidate> candidates = {make_candidate("c1", 4.0, 0),
                                         make_candidate("c2", 5.0, 0)};
    WarnCapture capture;
    const auto result = select_exact_dp(candidates, 10.0);
    CHECK(result.selected.empty());
    CHECK(capture.any_contains("zero"));
}

TEST_CASE("bids above the budget are never selected") {
    std::vector<Candidate> candidates = {make_candidate("c1", 500.0, 9000),
                                         make_candidate("c2", 50.0, 100)};
    for (const auto& result : {select_exact_dp(candidates, 100.0),
                               select_fptas(candidates, 100.0, 0.1),
                               select_greedy_baseline(candidates, 100.0),
                               select_exhaustive(candidates, 100.0)}) {
        REQUIRE(result.selected.size() == 1);
        CHECK(result.selected[0] == "c2");
    }
}

TEST_CASE("dp matches exhaustive enumeration on random instances") {
    Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const auto n = 2 + rng.below(11);  // 2..12 candidates
        const auto candidates = random_instance(rng, n);
        const double budget = random_budget(rng, n);
        const auto dp = select_exact_dp(candidates, budget);
        const auto brute = select_exhaustive(candidates, budget);
        CHECK(dp.achieved_amplified == brute.achieved_amplified);
        CHECK(dp.total_bid <= budget);
        CHECK(sum_amplified(candidates, dp.selected) == dp.achieved_amplified);
        CHECK(std::abs(sum_bids(candidates, dp.selected) - dp.total_bid) <= 1e-9);
    }
}

TEST_CASE("dp reported totals match the selected set") {
    Rng rng(55);
    const auto candidates = random_instance(rng, 25);
    const auto result = select_exact_dp(candidates, 900.0);
    CHECK(sum_amplified(candidates, result.selected) == result.achieved_amplified);
    CHECK(std::abs(sum_bids(candidates, result.selected) - result.total_bid) <= 1e-9);
    CHECK(std::is_sorted(result.selected.begin(), result.selected.end()));
    double utility = 0.0;
    for (const auto& id : result.selected) {
        const auto it = std::find_if(candidates.begin(), candidates.end(),
                                     [&](const Candidate& c) { return c.user_id == id; });
        utility += it->utility;
    }
    CHECK(std::abs(utility - result.achieved_utility) <= 1e-9);
}

TEST_CASE("adding a candidate never lowers the dp optimum") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        auto candidates = random_instance(rng, 12);
        const double budget = random_budget(rng, 12);
        const auto base = select_exact_dp(candidates, budget);
        candidates.push_back(make_candidate("extra", rng.uniform(50.0, 150.0),
                                            static_cast<std::int64_t>(rng.below(10000))));
        const auto extended = select_exact_dp(candidates, budget);
        CHECK(extended.achieved_amplified >= base.achieved_amplified);
    }
}

TEST_CASE("fptas respects the approximation bound") {
    Rng rng(31337);
    for (int trial = 0; trial < 30; ++trial) {
        const auto candidates = random_instance(rng, 20);
        const double budget = random_budget(rng, 20);
        const auto exact = select_exact_dp(candidates, budget);
        for (double epsilon : {0.1, 0.3, 0.5}) {
            const auto approx = select_fptas(candidates, budget, epsilon);
            CHECK(static_cast<double>(approx.achieved_amplified) >=
                  (1.0 - epsilon) * static_cast<double>(exact.achieved_amplified) - 1e-9);
            CHECK(approx.total_bid <= budget + 1e-9);
            CHECK(sum_amplified(candidates, approx.selected) == approx.achieved_amplified);
        }
    }
}

TEST_CASE("fptas with a tiny epsilon reduces to the exact dp") {
    Rng rng(99);
    const auto candidates = random_instance(rng, 15);
    const auto exact = select_exact_dp(candidates, 700.0);
    const auto approx = select_fptas(candidates, 700.0, 1e-9);
    CHECK(approx.achieved_amplified == exact.achieved_amplified);
}

TEST_CASE("fptas shrinks the dp table") {
    Rng rng(100);
    const auto candidates = random_instance(rng, 60);
    const auto exact = select_exact_dp(candidates, 2000.0);
    const auto approx = select_fptas(candidates, 2000.0, 0.3);
    CHECK(approx.table_cells < exact.table_cells / 10);
}

TEST_CASE("fptas validates epsilon") {
    const auto candidates = reference_instance();
    CHECK_THROWS_AS(select_fptas(candidates, 10.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(select_fptas(candidates, 10.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(select_fptas(candidates, 10.0, -0.5), std::invalid_argument);
}

TEST_CASE("greedy never overspends and never beats the dp") {
    Rng rng(4242);
    for (int trial = 0; trial < 20; ++trial) {
        const auto candidates = random_instance(rng, 15);
        const double budget = random_budget(rng, 15);
        const auto greedy = select_greedy_baseline(candidates, budget);
        const auto dp = select_exact_dp(candidates, budget);
        CHECK(greedy.total_bid <= budget + 1e-9);
        CHECK(greedy.achieved_amplified <= dp.achieved_amplified);
        // cheapest-first packing maximizes headcount
        CHECK(greedy.selected.size() >= dp.selected.size());
    }
}

TEST_CASE("exhaustive breaks value ties toward cheaper then smaller id sets") {
    // two singletons with equal value; the cheaper one must win
    std::vector<Candidate> by_bid = {make_candidate("a", 6.0, 100),
                                     make_candidate("b", 4.0, 100)};
    const auto cheaper = select_exhaustive(by_bid, 6.0);
    REQUIRE(cheaper.selected.size() == 1);
    CHECK(cheaper.selected[0] == "b");

    // equal value and equal bid; the lexicographically smaller id set wins
    std::vector<Candidate> by_id = {make_candidate("b", 4.0, 100),
                                    make_candidate("a", 4.0, 100)};
    const auto lexical = select_exhaustive(by_id, 4.0);
    REQUIRE(lexical.selected.size() == 1);
    CHECK(lexical.selected[0] == "a");
}

TEST_CASE("exhaustive refuses oversized instances") {
    Rng rng(5);
    const auto candidates = random_instance(rng, 21);
    CHECK_THROWS_AS(select_exhaustive(candidates, 500.0), std::invalid_argument);
}

}  // TEST_SUITE
