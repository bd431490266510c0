// mechanisms.hpp — the four mechanisms: the α single-item mechanism over the aligned
// path order, its multi-item generalization, the unit-demand top-k variant, and the
// tree-scoped revised take-away executor.
#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "netauct/model.hpp"

namespace netauct {

// ⌊√k⌋ in pure integer arithmetic (no floating-point rounding hazard).
int nk_of(int k);

enum class PaymentGroup { group1, group2, group3, group4 };

struct AlphaApgClassification {
    std::map<BuyerId, PaymentGroup> group;  // informed buyers only
    std::optional<BuyerId> winner;
    std::set<BuyerId> candidate_set;  // buyers whose report clears the α threshold
    Rat alpha;
};

// Single-item mechanism. The winner is the aligned-path-closest buyer whose declared
// value is at least α times the top declared value among informed buyers. The winner
// pays a close-set statistic (divided by α in the "close already covers the far side"
// case); buyers ahead of the winner are subsidised up to the α threshold; buyers behind
// pay nothing. Throws precondition_error for k ≠ 1, α outside (0,1), or no informed
// buyers.
std::pair<Outcome, AlphaApgClassification> alpha_apg(const AuctionInstance& instance,
                                                     const Rat& alpha);

struct GapgStatistics {
    int nk = 1;
    std::map<BuyerId, Rat> sum_valuations;  // top-n_k prefix sums, informed buyers
    Rat threshold;                          // n_k-th largest prefix sum (0 if fewer)
};

GapgStatistics gapg_statistics(const AuctionInstance& instance, int k);

// Multi-item mechanism: winners are the (at most n_k) informed buyers whose top-n_k
// prefix sum reaches the n_k-th largest such sum, ties to the smaller id; each winner
// takes exactly n_k items and pays the close-set analogue of the threshold; informed
// losers are subsidised by the difference. Throws precondition_error for k < 1.
Outcome gapg(const AuctionInstance& instance, int k);

enum class LoserTransfer {
    kth_statistic,  // losers keyed to the k-th largest first marginal (default reading)
    max_statistic,  // losers keyed to the largest first marginal
};

// Unit-demand variant: winners are the top-k informed buyers by first marginal (ties to
// the smaller id), each takes one item and pays the largest first marginal among buyers
// ahead of her in the aligned order; informed losers receive the chosen threshold
// statistic minus that same close-set maximum.
Outcome gapg_top_k_unit(const AuctionInstance& instance, int k,
                        LoserTransfer transfer = LoserTransfer::kth_statistic);

struct GidmEvent {
    enum class Kind { send, take_away, receive, decline, allocate };
    Kind kind;
    BuyerId actor = 0;   // 0 = the seller
    BuyerId target = 0;  // recipient of a send, victim of a take-away
    int count = 0;       // items moved by a send / finally held by an allocate
    std::optional<Rat> price;
};

struct GidmTreeState {
    std::map<BuyerId, BuyerId> parent;  // informed buyer -> parent, 0 = seller
    std::map<BuyerId, int> holdings;    // final item counts
    std::set<BuyerId> fixed_allocations;
    std::vector<GidmEvent> trace;
};

// Tree-scoped revised take-away executor (unit demand). The seller seeds each child
// branch with the number of top-k buyers in that subtree; processing branches with the
// lightest seed first and top-down within a branch, every non-locked holder is offered a
// trade at price max(0, B − A): B sums the top-m declared values outside her finalized
// set and subtree, A the top-(m−1) over the same pool with her direct children added
// back (m = items still unassigned). She trades iff the price is strictly below her
// declared value; a buyer not in the serve set who trades takes the item away from the
// lowest-valued serve member below her, and a victim displaced by her direct parent is
// locked out of trading and only relays. Throws precondition_error when the declared
// graph restricted to the informed buyers is not a tree rooted at the seller, or on
// multi-demand declarations.
std::pair<Outcome, GidmTreeState> gidm_revised(const AuctionInstance& instance, int k);

}  // namespace netauct
