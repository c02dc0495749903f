#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crowdsense/types.hpp"

namespace crowdsense {

// A filtered applicant, ready for the budgeted selection solvers. The raw
// utility is kept for reporting; the solvers optimize the integer amplified
// value so results are reproducible and the dynamic program stays exact.
struct Candidate {
    UserId user_id;
    double bid_price;
    double expected_delay;
    double utility;
    std::int64_t amplified;
};

enum class SolverKind { ExactDp, Fptas, Greedy, Exhaustive };

std::string solver_name(SolverKind kind);
SolverKind solver_from_name(const std::string& name);

struct SelectionResult {
    std::vector<UserId> selected;  // ascending by id
    double total_bid = 0.0;
    double achieved_utility = 0.0;         // sum of raw utilities
    std::int64_t achieved_amplified = 0;   // sum of amplified utilities
    SolverKind solver = SolverKind::ExactDp;
    std::uint64_t table_cells = 0;         // dynamic-program table extent, 0 otherwise
};

// Joins applications with their users, drops the ones promising a delay past
// the task threshold, and scores the rest. Rejects unknown applicants and a
// second application from the same user.
std::vector<Candidate> filter_candidates(const std::vector<MobileUser>& users,
                                         const std::vector<Application>& applications,
                                         const TaskSpec& task, const ReputationParams& params,
                                         double amplification = 1e4);

// Exact budgeted selection via a utility-indexed dynamic program: cell (i, k)
// holds the cheapest total bid that reaches amplified utility exactly k using
// the first i candidates. Runs in O(n * sum amplified) time.
SelectionResult select_exact_dp(const std::vector<Candidate>& candidates, double budget);

// Same dynamic program on utilities downscaled by max(epsilon * max_amplified
// / n, 1). The chosen set achieves at least (1 - epsilon) of the optimal
// amplified utility at a fraction of the table size.
SelectionResult select_fptas(const std::vector<Candidate>& candidates, double budget,
                             double epsilon);

// Cheapest-bid-first packing. Ignores utilities entirely; serves as the
// participant-count-maximizing baseline.
SelectionResult select_greedy_baseline(const std::vector<Candidate>& candidates, double budget);

// Full subset enumeration, limited to 20 candidates. Ties on amplified
// utility break toward the lower total bid, then the lexicographically
// smallest id set, which makes the optimum unique and testable.
SelectionResult select_exhaustive(const std::vector<Candidate>& candidates, double budget);

}  // namespace crowdsense
