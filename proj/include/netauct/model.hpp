// model.hpp — buyers, declared types, the diffusion graph, and the aligned path order.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "netauct/rational.hpp"

namespace netauct {

using BuyerId = int;

// Malformed input documents / instances. CLI maps this to exit status 2.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A structurally valid instance handed to an operation whose preconditions it does not
// meet (wrong k, non-tree topology for the tree-scoped executor, ...). CLI exit status 3.
class precondition_error : public std::runtime_error {
public:
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

struct BuyerType {
    std::vector<Rat> valuations;  // non-increasing marginal values, zero-padded on read
    std::set<BuyerId> neighbors;  // who this buyer forwards the information to

    bool operator==(const BuyerType&) const = default;
};

struct AuctionInstance {
    int n = 0;  // buyers are ids 1..n
    int k = 1;  // items for sale
    std::set<BuyerId> seller_neighbors;
    std::map<BuyerId, BuyerType> buyers;  // declared types θ'
    std::optional<std::map<BuyerId, BuyerType>> true_profile;
    std::optional<Rat> value_cap;  // v*, needed for budget-balance reports
    std::optional<Rat> alpha;      // default α for the single-item mechanism
    std::map<BuyerId, std::string> labels;  // optional display names (trace printing)

    const BuyerType& declared(BuyerId id) const;
    // True type when a true profile is attached, else the declaration.
    const BuyerType& truth(BuyerId id) const;
    // 1-based l-th declared marginal, 0 beyond the stored vector.
    Rat declared_value(BuyerId id, int l) const;
    Rat true_value(BuyerId id, int l) const;
};

// Throws input_error on any structural violation (ids outside 1..n or gapped, self
// edges, increasing marginals, negative or over-cap values, declared neighbor sets not
// contained in the true ones).
void validate_instance(const AuctionInstance& instance);

struct AlignedPath {
    std::vector<BuyerId> order;            // informed buyers, nearest first
    std::map<BuyerId, int> position;       // 1-based index into order
    std::map<BuyerId, int> bfs_distance;   // hops from the seller under declared edges
};

struct Outcome {
    std::map<BuyerId, int> allocation;  // missing id = 0 items
    std::map<BuyerId, Rat> net_payment;  // positive = buyer pays, negative = buyer receives
    std::optional<std::map<BuyerId, std::vector<Rat>>> per_item_payments;

    int items(BuyerId id) const;
    Rat payment(BuyerId id) const;
    Rat revenue() const;
};

// Buyers reachable from the seller by traversing declared neighbor edges.
std::set<BuyerId> informed_set(const AuctionInstance& instance);

// Informed buyers ordered lexicographically by (BFS distance from the seller, id);
// position[i] is the 1-based rank in that order.
AlignedPath build_apg(const AuctionInstance& instance);

// (buyers strictly before i, buyers strictly after i) in the aligned order.
// Throws precondition_error if i is not in the order (uninformed or unknown).
std::pair<std::set<BuyerId>, std::set<BuyerId>> close_far_split(const AlignedPath& apg, BuyerId i);

}  // namespace netauct
