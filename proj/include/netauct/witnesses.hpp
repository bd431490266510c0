// witnesses.hpp — hand-built worst-case instance families. Each construction is small
// enough to evaluate by hand, which is the point: the sweep and acceptance suites use
// these to pin the empirical minima to their exact analytic values.
#pragma once

#include "netauct/model.hpp"

namespace netauct {

// Two-buyer chain s→1→2 with v = (α·cap, cap): buyer 1 reaches the candidate bar
// exactly and wins ahead of the high-value buyer, so the efficiency ratio is exactly α.
inline AuctionInstance alpha_efficiency_witness(const Rat& alpha, const Rat& cap) {
    AuctionInstance instance;
    instance.n = 2;
    instance.k = 1;
    instance.value_cap = cap;
    instance.alpha = alpha;
    instance.seller_neighbors = {1};
    instance.buyers[1] = BuyerType{{alpha * cap}, {2}};
    instance.buyers[2] = BuyerType{{cap}, {}};
    instance.true_profile = instance.buyers;
    validate_instance(instance);
    return instance;
}

// Five-buyer path s→1→…→5 with only the far end valuing the item (at the cap): the
// four relays each collect the α·cap subsidy and the winner pays nothing, so revenue
// is −4·α·cap and the normalized revenue bound is exactly 1 − α.
inline AuctionInstance alpha_beta_witness(const Rat& alpha, const Rat& cap) {
    AuctionInstance instance;
    instance.n = 5;
    instance.k = 1;
    instance.value_cap = cap;
    instance.alpha = alpha;
    instance.seller_neighbors = {1};
    for (BuyerId b = 1; b <= 5; ++b) {
        std::set<BuyerId> next;
        if (b < 5) next.insert(b + 1);
        instance.buyers[b] = BuyerType{{b == 5 ? cap : Rat(0)}, std::move(next)};
    }
    instance.true_profile = instance.buyers;
    validate_instance(instance);
    return instance;
}

// One directly connected buyer valuing every copy at the cap: the multi-item rule
// hands out only ⌊√k⌋ of the k copies, so the efficiency ratio is exactly n_k/k.
inline AuctionInstance gapg_flat_witness(int k, const Rat& cap) {
    AuctionInstance instance;
    instance.n = 1;
    instance.k = k;
    instance.value_cap = cap;
    instance.seller_neighbors = {1};
    instance.buyers[1] = BuyerType{std::vector<Rat>(static_cast<std::size_t>(k), cap), {}};
    instance.true_profile = instance.buyers;
    validate_instance(instance);
    return instance;
}

}  // namespace netauct
