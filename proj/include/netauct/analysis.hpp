// analysis.hpp — welfare, efficiency-ratio, utility, revenue and budget-balance
// reporting over mechanism outcomes.
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "netauct/model.hpp"

namespace netauct {

using MechanismFn = std::function<Outcome(const AuctionInstance&)>;

struct WelfareReport {
    Rat achieved;
    Rat optimal;
    Rat ratio;  // achieved/optimal, defined as 1 when optimal = 0
};

struct RevenueReport {
    Rat revenue;                    // sum of net payments
    std::optional<Rat> normalized;  // 1 + revenue/((n-1)·v*), when computable
};

// Maximum feasible surplus: the k largest marginal values pooled over all informed
// buyers (greedy is exact because each buyer's marginals are non-increasing). Uses true
// valuations when a true profile is attached, declared otherwise.
Rat optimal_welfare(const AuctionInstance& instance, int k);

// Σ over buyers of the first f_i true marginal values. Throws precondition_error when
// the outcome allocates to a buyer outside the informed set.
Rat achieved_welfare(const AuctionInstance& instance, const Outcome& outcome);

// Quasi-linear payoff: value of received items (true marginals) minus net payment.
Rat utility(const AuctionInstance& instance, BuyerId buyer, const Outcome& outcome);

WelfareReport welfare_report(const AuctionInstance& instance, int k, const Outcome& outcome);
RevenueReport revenue_report(const AuctionInstance& instance, const Outcome& outcome);

// Worst welfare ratio across the corpus (a lower-bound estimate of the true worst case,
// exact only when the corpus contains a worst-case witness). Throws on an empty corpus.
Rat empirical_efficiency(const MechanismFn& mechanism,
                         const std::vector<AuctionInstance>& corpus);

// 1 + (worst corpus revenue)/((n−1)·v*). All corpus instances must share one n ≥ 2, and
// v* must be positive.
Rat empirical_beta(const MechanismFn& mechanism, const std::vector<AuctionInstance>& corpus,
                   const Rat& v_star);

}  // namespace netauct
