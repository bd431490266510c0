#include "netauct/model.hpp"

#include <algorithm>
#include <deque>

namespace netauct {

const BuyerType& AuctionInstance::declared(BuyerId id) const {
    auto it = buyers.find(id);
    if (it == buyers.end()) throw input_error("unknown buyer id " + std::to_string(id));
    return it->second;
}

const BuyerType& AuctionInstance::truth(BuyerId id) const {
    if (true_profile) {
        auto it = true_profile->find(id);
        if (it == true_profile->end()) throw input_error("buyer " + std::to_string(id) + " missing from true profile");
        return it->second;
    }
    return declared(id);
}

namespace {
Rat marginal(const BuyerType& type, int l) {
    if (l < 1) throw input_error("marginal index must be 1-based");
    const auto idx = static_cast<std::size_t>(l - 1);
    return idx < type.valuations.size() ? type.valuations[idx] : Rat(0);
}
}  // namespace

Rat AuctionInstance::declared_value(BuyerId id, int l) const { return marginal(declared(id), l); }
Rat AuctionInstance::true_value(BuyerId id, int l) const { return marginal(truth(id), l); }

namespace {
void validate_type(const AuctionInstance& instance, BuyerId id, const BuyerType& type,
                   const char* which) {
    for (BuyerId nb : type.neighbors) {
        if (nb == id)
            throw input_error("buyer " + std::to_string(id) + " lists itself as a neighbor");
        if (nb < 1 || nb > instance.n)
            throw input_error("buyer " + std::to_string(id) + " lists out-of-range neighbor " +
                              std::to_string(nb));
    }
    const auto& vals = type.valuations;
    for (std::size_t l = 0; l < vals.size(); ++l) {
        if (vals[l].is_negative())
            throw input_error("buyer " + std::to_string(id) + " has a negative " + which +
                              " valuation");
        if (l > 0 && vals[l] > vals[l - 1])
            throw input_error("buyer " + std::to_string(id) + " has increasing " + which +
                              " marginal values");
        if (instance.value_cap && vals[l] > *instance.value_cap)
            throw input_error("buyer " + std::to_string(id) + " exceeds the value cap");
    }
}
}  // namespace

void validate_instance(const AuctionInstance& instance) {
    if (instance.n < 0) throw input_error("negative buyer count");
    if (instance.k < 1) throw input_error("item count must be positive");
    if (instance.value_cap && instance.value_cap->is_negative())
        throw input_error("negative value cap");
    if (static_cast<int>(instance.buyers.size()) != instance.n)
        throw input_error("expected exactly " + std::to_string(instance.n) + " buyers, got " +
                          std::to_string(instance.buyers.size()));
    int expect = 1;
    for (const auto& [id, type] : instance.buyers) {
        if (id != expect)
            throw input_error("buyer ids must be 1.." + std::to_string(instance.n) +
                              " without gaps; missing id " + std::to_string(expect));
        ++expect;
        validate_type(instance, id, type, "declared");
    }
    for (BuyerId nb : instance.seller_neighbors)
        if (nb < 1 || nb > instance.n)
            throw input_error("seller lists out-of-range neighbor " + std::to_string(nb));
    if (instance.true_profile) {
        if (instance.true_profile->size() != instance.buyers.size())
            throw input_error("true profile does not cover every buyer");
        for (const auto& [id, true_type] : *instance.true_profile) {
            auto it = instance.buyers.find(id);
            if (it == instance.buyers.end())
                throw input_error("true profile names unknown buyer " + std::to_string(id));
            validate_type(instance, id, true_type, "true");
            for (BuyerId nb : it->second.neighbors)
                if (!true_type.neighbors.count(nb))
                    throw input_error("buyer " + std::to_string(id) +
                                      " declares neighbor " + std::to_string(nb) +
                                      " outside its true neighbor set");
        }
    }
}

std::set<BuyerId> informed_set(const AuctionInstance& instance) {
    std::set<BuyerId> seen;
    std::deque<BuyerId> frontier;
    for (BuyerId id : instance.seller_neighbors)
        if (seen.insert(id).second) frontier.push_back(id);
    while (!frontier.empty()) {
        const BuyerId cur = frontier.front();
        frontier.pop_front();
        for (BuyerId nb : instance.declared(cur).neighbors)
            if (seen.insert(nb).second) frontier.push_back(nb);
    }
    return seen;
}

AlignedPath build_apg(const AuctionInstance& instance) {
    AlignedPath apg;
    std::deque<BuyerId> frontier;
    for (BuyerId id : instance.seller_neighbors)
        if (apg.bfs_distance.emplace(id, 1).second) frontier.push_back(id);
    while (!frontier.empty()) {
        const BuyerId cur = frontier.front();
        frontier.pop_front();
        const int d = apg.bfs_distance.at(cur);
        for (BuyerId nb : instance.declared(cur).neighbors)
            if (apg.bfs_distance.emplace(nb, d + 1).second) frontier.push_back(nb);
    }
    apg.order.reserve(apg.bfs_distance.size());
    for (const auto& [id, dist] : apg.bfs_distance) apg.order.push_back(id);
    std::sort(apg.order.begin(), apg.order.end(), [&](BuyerId a, BuyerId b) {
        const int da = apg.bfs_distance.at(a);
        const int db = apg.bfs_distance.at(b);
        return da != db ? da < db : a < b;
    });
    for (std::size_t i = 0; i < apg.order.size(); ++i)
        apg.position[apg.order[i]] = static_cast<int>(i) + 1;
    return apg;
}

std::pair<std::set<BuyerId>, std::set<BuyerId>> close_far_split(const AlignedPath& apg, BuyerId i) {
    auto it = apg.position.find(i);
    if (it == apg.position.end())
        throw precondition_error("buyer " + std::to_string(i) +
                                 " is not informed; close/far split undefined");
    const int pos = it->second;
    std::pair<std::set<BuyerId>, std::set<BuyerId>> split;
    for (const auto& [id, p] : apg.position) {
        if (p < pos) split.first.insert(id);
        else if (p > pos) split.second.insert(id);
    }
    return split;
}

int Outcome::items(BuyerId id) const {
    auto it = allocation.find(id);
    return it == allocation.end() ? 0 : it->second;
}

Rat Outcome::payment(BuyerId id) const {
    auto it = net_payment.find(id);
    return it == net_payment.end() ? Rat(0) : it->second;
}

Rat Outcome::revenue() const {
    Rat total(0);
    for (const auto& [id, p] : net_payment) total += p;
    return total;
}

}  // namespace netauct
