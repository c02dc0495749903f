#include "crowdsense/selection.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "crowdsense/utility.hpp"
#include "crowdsense/warn.hpp"

namespace crowdsense {

namespace {

void validate_inputs(const std::vector<Candidate>& candidates, double budget) {
    if (!(std::isfinite(budget) && budget >= 0.0))
        throw std::invalid_argument("budget must be >= 0");
    std::set<UserId> seen;
    for (const auto& c : candidates) {
        if (c.user_id.empty()) throw std::invalid_argument("candidate user id must be non-empty");
        if (!seen.insert(c.user_id).second)
            throw std::invalid_argument("duplicate candidate: " + c.user_id);
        if (!(std::isfinite(c.bid_price) && c.bid_price > 0.0))
            throw std::invalid_argument("candidate bid must be positive");
        if (c.amplified < 0)
            throw std::invalid_argument("candidate amplified utility must be >= 0");
    }
}

void warn_if_worthless(const std::vector<Candidate>& candidates) {
    if (candidates.empty()) return;
    for (const auto& c : candidates)
        if (c.amplified > 0) return;
    warn("all amplified utilities are zero; selection degenerates to the empty set");
}

SelectionResult finalize(const std::vector<Candidate>& candidates,
                         std::vector<std::size_t> chosen, SolverKind solver,
                         std::uint64_t table_cells) {
    std::sort(chosen.begin(), chosen.end());
    SelectionResult result;
    result.solver = solver;
    result.table_cells = table_cells;
    for (std::size_t idx : chosen) {
        const Candidate& c = candidates[idx];
        result.selected.push_back(c.user_id);
        result.total_bid += c.bid_price;
        result.achieved_utility += c.utility;
        result.achieved_amplified += c.amplified;
    }
    std::sort(result.selected.begin(), result.selected.end());
    return result;
}

// Indices of candidates that could fit in the budget at all. Oversized bids
// can never be part of a solution and would break the rescaled solver's
// approximation bound if left in.
std::vector<std::size_t> affordable(const std::vector<Candidate>& candidates, double budget) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (candidates[i].bid_price <= budget) kept.push_back(i);
    return kept;
}

struct DpOutcome {
    std::vector<std::size_t> chosen;  // positions into the value/bid arrays
    std::uint64_t table_cells = 0;
};

// Utility-indexed 0-1 knapsack: cell k of the rolling row holds the cheapest
// total bid reaching value exactly k; unreachable cells sit at budget + 1.
// The include decisions are kept as one bit per (item, value) pair so the
// winning set can be reconstructed without storing the full cost table.
DpOutcome run_dp(const std::vector<std::int64_t>& values, const std::vector<double>& bids,
                 double budget) {
    const std::size_t n = values.size();
    std::int64_t cap = 0;
    for (auto v : values) cap += v;

    const double sentinel = budget + 1.0;
    std::vector<double> best(static_cast<std::size_t>(cap) + 1, sentinel);
    best[0] = 0.0;

    const std::size_t words = static_cast<std::size_t>(cap) / 64 + 1;
    std::vector<std::uint64_t> taken(n * words, 0);

    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t w = values[i];
        if (w == 0) continue;  // including it costs a positive bid for nothing
        const double b = bids[i];
        std::uint64_t* row = taken.data() + i * words;
        for (std::int64_t k = cap; k >= w; --k) {
            const double with = best[k - w] + b;
            if (with < best[k]) {
                best[k] = with;
                row[k >> 6] |= 1ull << (k & 63);
            }
        }
    }

    std::int64_t achieved = 0;
    for (std::int64_t k = cap; k >= 0; --k) {
        if (best[k] <= budget) {
            achieved = k;
            break;
        }
    }

    DpOutcome out;
    out.table_cells = (static_cast<std::uint64_t>(n) + 1) * (static_cast<std::uint64_t>(cap) + 1);
    std::int64_t k = achieved;
    for (std::size_t i = n; i-- > 0;) {
        if (values[i] == 0) continue;
        const std::uint64_t* row = taken.data() + i * words;
        if ((row[k >> 6] >> (k & 63)) & 1ull) {
            out.chosen.push_back(i);
            k -= values[i];
        }
    }
    if (k != 0) throw std::logic_error("selection table reconstruction drifted");
    return out;
}

SelectionResult solve_scaled(const std::vector<Candidate>& candidates, double budget,
                             const std::vector<std::int64_t>& scaled_values, SolverKind solver) {
    const auto eligible = affordable(candidates, budget);
    std::vector<std::int64_t> values;
    std::vector<double> bids;
    values.reserve(eligible.size());
    bids.reserve(eligible.size());
    for (std::size_t pos : eligible) {
        values.push_back(scaled_values[pos]);
        bids.push_back(candidates[pos].bid_price);
    }
    DpOutcome dp = run_dp(values, bids, budget);
    std::vector<std::size_t> chosen;
    chosen.reserve(dp.chosen.size());
    for (std::size_t pos : dp.chosen) chosen.push_back(eligible[pos]);
    return finalize(candidates, std::move(chosen), solver, dp.table_cells);
}

}  // namespace

std::string solver_name(SolverKind kind) {
    switch (kind) {
        case SolverKind::ExactDp: return "exact_dp";
        case SolverKind::Fptas: return "fptas";
        case SolverKind::Greedy: return "greedy";
        case SolverKind::Exhaustive: return "exhaustive";
    }
    throw std::invalid_argument("unknown solver kind");
}

SolverKind solver_from_name(const std::string& name) {
    if (name == "exact_dp") return SolverKind::ExactDp;
    if (name == "fptas") return SolverKind::Fptas;
    if (name == "greedy") return SolverKind::Greedy;
    if (name == "exhaustive") return SolverKind::Exhaustive;
    throw std::invalid_argument("unknown solver: " + name);
}

std::vector<Candidate> filter_candidates(const std::vector<MobileUser>& users,
                                         const std::vector<Application>& applications,
                                         const TaskSpec& task, const ReputationParams& params,
                                         double amplification) {
    if (!(std::isfinite(amplification) && amplification > 0.0))
        throw std::invalid_argument("amplification must be positive");

    std::unordered_map<UserId, const MobileUser*> by_id;
    for (const auto& u : users) {
        if (!by_id.emplace(u.id, &u).second)
            throw std::invalid_argument("duplicate user: " + u.id);
    }

    std::set<UserId> applied;
    std::vector<Candidate> candidates;
    for (const auto& app : applications) {
        if (!applied.insert(app.user_id).second)
            throw std::invalid_argument("duplicate application from user: " + app.user_id);
        auto it = by_id.find(app.user_id);
        if (it == by_id.end())
            throw std::invalid_argument("application from unknown user: " + app.user_id);
        if (app.expected_delay > task.delay_threshold) continue;
        const double e = expected_utility(*it->second, app, task, params).value();
        candidates.push_back({app.user_id, app.bid_price, app.expected_delay, e,
                              static_cast<std::int64_t>(std::floor(e * amplification))});
    }
    return candidates;
}

SelectionResult select_exact_dp(const std::vector<Candidate>& candidates, double budget) {
    validate_inputs(candidates, budget);
    warn_if_worthless(candidates);
    std::vector<std::int64_t> values(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) values[i] = candidates[i].amplified;
    return solve_scaled(candidates, budget, values, SolverKind::ExactDp);
}

SelectionResult select_fptas(const std::vector<Candidate>& candidates, double budget,
                             double epsilon) {
    validate_inputs(candidates, budget);
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0, 1)");
    warn_if_worthless(candidates);

    std::int64_t max_value = 0;
    std::size_t usable = 0;
    for (const auto& c : candidates) {
        if (c.bid_price > budget) continue;
        ++usable;
        max_value = std::max(max_value, c.amplified);
    }
    double step = 1.0;
    if (usable > 0)
        step = std::max(epsilon * static_cast<double>(max_value) / static_cast<double>(usable),
                        1.0);

    std::vector<std::int64_t> values(candidates.size(), 0);
    for (std::size_t i = 0; i < candidates.size(); ++i)
        values[i] =
            static_cast<std::int64_t>(std::floor(static_cast<double>(candidates[i].amplified) / step));
    return solve_scaled(candidates, budget, values, SolverKind::Fptas);
}

SelectionResult select_greedy_baseline(const std::vector<Candidate>& candidates, double budget) {
    validate_inputs(candidates, budget);
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (candidates[a].bid_price != candidates[b].bid_price)
            return candidates[a].bid_price < candidates[b].bid_price;
        return candidates[a].user_id < candidates[b].user_id;
    });

    std::vector<std::size_t> chosen;
    double total = 0.0;
    for (std::size_t idx : order) {
        if (total + candidates[idx].bid_price > budget) break;
        total += candidates[idx].bid_price;
        chosen.push_back(idx);
    }
    return finalize(candidates, std::move(chosen), SolverKind::Greedy, 0);
}

SelectionResult select_exhaustive(const std::vector<Candidate>& candidates, double budget) {
    validate_inputs(candidates, budget);
    const std::size_t n = candidates.size();
    if (n > 20) throw std::invalid_argument("exhaustive solver is limited to 20 candidates");

    auto ids_of = [&](std::uint32_t mask) {
        std::vector<UserId> ids;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) ids.push_back(candidates[i].user_id);
        std::sort(ids.begin(), ids.end());
        return ids;
    };

    std::uint32_t best_mask = 0;
    std::int64_t best_value = 0;
    double best_bid = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        double bid = 0.0;
        std::int64_t value = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                bid += candidates[i].bid_price;
                value += candidates[i].amplified;
            }
        }
        if (bid > budget) continue;
        if (value < best_value) continue;
        if (value == best_value) {
            if (bid > best_bid) continue;
            if (bid == best_bid && !(ids_of(mask) < ids_of(best_mask))) continue;
        }
        best_mask = mask;
        best_value = value;
        best_bid = bid;
    }

    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < n; ++i)
        if (best_mask & (1u << i)) chosen.push_back(i);
    return finalize(candidates, std::move(chosen), SolverKind::Exhaustive, 0);
}

}  // namespace crowdsense
