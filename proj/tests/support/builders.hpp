// builders.hpp — compact instance constructors shared by the test suites.
#pragma once

#include <optional>
#include <vector>

#include "netauct/model.hpp"

namespace netauct::testing {

// Chain s→1→2→…→n; values[i] is buyer i+1's valuation vector.
inline AuctionInstance make_chain(const std::vector<std::vector<Rat>>& values, int k = 1,
                                  std::optional<Rat> alpha = {},
                                  std::optional<Rat> cap = {}) {
    AuctionInstance instance;
    instance.n = static_cast<int>(values.size());
    instance.k = k;
    instance.alpha = alpha;
    instance.value_cap = cap;
    instance.seller_neighbors = {1};
    for (int b = 1; b <= instance.n; ++b) {
        std::set<BuyerId> next;
        if (b < instance.n) next.insert(b + 1);
        instance.buyers[b] = BuyerType{values[static_cast<std::size_t>(b - 1)], next};
    }
    instance.true_profile = instance.buyers;
    validate_instance(instance);
    return instance;
}

inline AuctionInstance make_chain(const std::vector<Rat>& single_values, int k = 1,
                                  std::optional<Rat> alpha = {},
                                  std::optional<Rat> cap = {}) {
    std::vector<std::vector<Rat>> values;
    for (const Rat& v : single_values) values.push_back({v});
    return make_chain(values, k, alpha, cap);
}

// The six-buyer two-branch network: seller→{1,6}, 1→3, 3→2, 6→5, 5→4.
inline AuctionInstance make_two_branch(const std::vector<Rat>& values = {
                                           Rat(3), Rat(9), Rat(6), Rat(8), Rat(2),
                                           Rat(5)}) {
    AuctionInstance instance;
    instance.n = 6;
    instance.k = 1;
    instance.seller_neighbors = {1, 6};
    const std::vector<std::set<BuyerId>> neighbors = {{3}, {}, {2}, {}, {4}, {5}};
    for (int b = 1; b <= 6; ++b)
        instance.buyers[b] = BuyerType{{values[static_cast<std::size_t>(b - 1)]},
                                       neighbors[static_cast<std::size_t>(b - 1)]};
    instance.true_profile = instance.buyers;
    validate_instance(instance);
    return instance;
}

}  // namespace netauct::testing
