#include "netauct/mechanisms.hpp"

#include <algorithm>
#include <stdexcept>

namespace netauct {

int nk_of(int k) {
    if (k < 1) throw precondition_error("item count must be positive");
    int r = 0;
    while ((r + 1) <= k / (r + 1)) ++r;  // largest r with r*r <= k, overflow-safe
    return r;
}

namespace {

// k'-th largest element of values; 0 when fewer than k' elements are present.
Rat kth_largest(std::vector<Rat> values, int kth) {
    if (kth < 1) throw precondition_error("order statistic index must be positive");
    if (static_cast<int>(values.size()) < kth) return Rat(0);
    std::nth_element(values.begin(), values.begin() + (kth - 1), values.end(),
                     [](const Rat& a, const Rat& b) { return a > b; });
    return values[static_cast<std::size_t>(kth - 1)];
}

// Sum of the top `take` elements (all of them if fewer).
Rat top_sum(std::vector<Rat> values, int take) {
    if (take <= 0) return Rat(0);
    const int use = std::min<int>(take, static_cast<int>(values.size()));
    std::partial_sort(values.begin(), values.begin() + use, values.end(),
                      [](const Rat& a, const Rat& b) { return a > b; });
    Rat total(0);
    for (int i = 0; i < use; ++i) total += values[static_cast<std::size_t>(i)];
    return total;
}

}  // namespace

std::pair<Outcome, AlphaApgClassification> alpha_apg(const AuctionInstance& instance,
                                                     const Rat& alpha) {
    if (!(Rat(0) < alpha && alpha < Rat(1)))
        throw precondition_error("alpha must lie strictly between 0 and 1");
    if (instance.k != 1)
        throw precondition_error("single-item mechanism requires k = 1");

    const AlignedPath apg = build_apg(instance);
    if (apg.order.empty())
        throw precondition_error("no informed buyers: nothing to sell");

    Rat top(0);
    for (BuyerId b : apg.order) {
        const Rat v = instance.declared_value(b, 1);
        if (v > top) top = v;
    }
    const Rat bar = alpha * top;

    AlphaApgClassification cls;
    cls.alpha = alpha;
    for (BuyerId b : apg.order)
        if (instance.declared_value(b, 1) >= bar) cls.candidate_set.insert(b);

    // First candidate in aligned order; the top-valued buyer is always a candidate, so
    // the set is never empty here.
    BuyerId winner = 0;
    std::size_t winner_pos = 0;
    for (std::size_t j = 0; j < apg.order.size(); ++j) {
        if (cls.candidate_set.count(apg.order[j])) {
            winner = apg.order[j];
            winner_pos = j;
            break;
        }
    }
    if (winner == 0) throw std::logic_error("candidate set empty despite informed buyers");
    cls.winner = winner;

    Rat close_max(0);  // best declared value strictly ahead of the winner
    for (std::size_t j = 0; j < winner_pos; ++j) {
        const Rat v = instance.declared_value(apg.order[j], 1);
        if (v > close_max) close_max = v;
    }
    Rat far_max(0);
    for (std::size_t j = winner_pos + 1; j < apg.order.size(); ++j) {
        const Rat v = instance.declared_value(apg.order[j], 1);
        if (v > far_max) far_max = v;
    }

    Outcome outcome;
    outcome.allocation[winner] = 1;

    Rat running_close(0);
    for (std::size_t j = 0; j < apg.order.size(); ++j) {
        const BuyerId b = apg.order[j];
        if (j < winner_pos) {
            cls.group[b] = PaymentGroup::group2;
            outcome.net_payment[b] = running_close - bar;
        } else if (j == winner_pos) {
            if (close_max < alpha * far_max) {
                cls.group[b] = PaymentGroup::group1;
                outcome.net_payment[b] = close_max;
            } else {
                cls.group[b] = PaymentGroup::group3;
                outcome.net_payment[b] = close_max / alpha;
            }
        } else {
            cls.group[b] = PaymentGroup::group4;
            outcome.net_payment[b] = Rat(0);
        }
        const Rat v = instance.declared_value(b, 1);
        if (v > running_close) running_close = v;
    }
    return {std::move(outcome), std::move(cls)};
}

GapgStatistics gapg_statistics(const AuctionInstance& instance, int k) {
    GapgStatistics stats;
    stats.nk = nk_of(k);
    std::vector<Rat> sums;
    for (BuyerId b : informed_set(instance)) {
        Rat sum(0);
        for (int l = 1; l <= stats.nk; ++l) sum += instance.declared_value(b, l);
        stats.sum_valuations[b] = sum;
        sums.push_back(sum);
    }
    stats.threshold = kth_largest(std::move(sums), stats.nk);
    return stats;
}

Outcome gapg(const AuctionInstance& instance, int k) {
    const GapgStatistics stats = gapg_statistics(instance, k);
    const AlignedPath apg = build_apg(instance);

    // Qualifiers ordered by (prefix sum desc, id asc); at most n_k of them win, which
    // keeps the allocation within k items since n_k² ≤ k.
    std::vector<BuyerId> qualifiers;
    for (const auto& [b, sum] : stats.sum_valuations)
        if (sum >= stats.threshold) qualifiers.push_back(b);
    std::sort(qualifiers.begin(), qualifiers.end(), [&](BuyerId a, BuyerId b) {
        const Rat& sa = stats.sum_valuations.at(a);
        const Rat& sb = stats.sum_valuations.at(b);
        return sa != sb ? sa > sb : a < b;
    });
    if (static_cast<int>(qualifiers.size()) > stats.nk)
        qualifiers.resize(static_cast<std::size_t>(stats.nk));
    std::set<BuyerId> winners(qualifiers.begin(), qualifiers.end());

    Outcome outcome;
    for (BuyerId b : apg.order) {
        std::vector<Rat> close_sums;
        for (const auto& [other, pos] : apg.position)
            if (pos < apg.position.at(b)) close_sums.push_back(stats.sum_valuations.at(other));
        const Rat close_stat = kth_largest(std::move(close_sums), stats.nk);
        if (winners.count(b)) {
            outcome.allocation[b] = stats.nk;
            outcome.net_payment[b] = close_stat;
        } else {
            outcome.net_payment[b] = close_stat - stats.threshold;  // a subsidy (≤ 0)
        }
    }
    return outcome;
}

Outcome gapg_top_k_unit(const AuctionInstance& instance, int k, LoserTransfer transfer) {
    if (k < 1) throw precondition_error("item count must be positive");
    const AlignedPath apg = build_apg(instance);

    std::vector<BuyerId> ranked(apg.order);
    std::sort(ranked.begin(), ranked.end(), [&](BuyerId a, BuyerId b) {
        const Rat va = instance.declared_value(a, 1);
        const Rat vb = instance.declared_value(b, 1);
        return va != vb ? va > vb : a < b;
    });
    if (static_cast<int>(ranked.size()) > k) ranked.resize(static_cast<std::size_t>(k));
    std::set<BuyerId> winners(ranked.begin(), ranked.end());

    std::vector<Rat> firsts;
    for (BuyerId b : apg.order) firsts.push_back(instance.declared_value(b, 1));
    const Rat threshold = transfer == LoserTransfer::kth_statistic
                              ? kth_largest(firsts, k)
                              : kth_largest(firsts, 1);

    Outcome outcome;
    for (BuyerId b : apg.order) {
        Rat close_max(0);
        for (const auto& [other, pos] : apg.position)
            if (pos < apg.position.at(b)) {
                const Rat v = instance.declared_value(other, 1);
                if (v > close_max) close_max = v;
            }
        if (winners.count(b)) {
            outcome.allocation[b] = 1;
            outcome.net_payment[b] = close_max;
        } else {
            outcome.net_payment[b] = close_max - threshold;
        }
    }
    return outcome;
}

namespace {

struct GidmContext {
    const AuctionInstance* instance = nullptr;
    int k = 0;
    std::map<BuyerId, BuyerId> parent;                 // 0 = seller
    std::map<BuyerId, std::vector<BuyerId>> children;  // ascending ids
    std::map<BuyerId, std::set<BuyerId>> subtree;      // node included
    std::set<BuyerId> serve;         // still destined for an item
    std::set<BuyerId> finalized;     // takers + receivers
    std::set<BuyerId> locked;        // displaced by the direct parent: relay only
    std::map<BuyerId, int> holding;
    Outcome outcome;
    GidmTreeState state;

    Rat value(BuyerId b) const { return instance->declared_value(b, 1); }

    int serve_in(const std::set<BuyerId>& nodes) const {
        int count = 0;
        for (BuyerId b : nodes)
            if (serve.count(b)) ++count;
        return count;
    }
};

void gidm_build_tree(GidmContext& ctx, const std::set<BuyerId>& informed) {
    const AuctionInstance& instance = *ctx.instance;
    for (BuyerId b : informed) {
        int parents = 0;
        BuyerId parent = 0;
        if (instance.seller_neighbors.count(b)) {
            ++parents;
            parent = 0;
        }
        for (BuyerId other : informed) {
            if (other != b && instance.declared(other).neighbors.count(b)) {
                ++parents;
                parent = other;
            }
        }
        if (parents != 1)
            throw precondition_error(
                "declared graph is not a tree rooted at the seller (buyer " +
                std::to_string(b) + " has " + std::to_string(parents) + " informed parents)");
        ctx.parent[b] = parent;
        if (instance.declared_value(b, 2) > Rat(0))
            throw precondition_error("take-away executor requires unit-demand valuations (buyer " +
                                     std::to_string(b) + " declares a second marginal)");
    }
    for (const auto& [b, p] : ctx.parent)
        if (p != 0) ctx.children[p].push_back(b);
    for (auto& [b, kids] : ctx.children) std::sort(kids.begin(), kids.end());
    // Subtrees bottom-up: ids do not order the tree, so accumulate by repeated passes
    // over the parent chain instead.
    for (BuyerId b : informed) {
        for (BuyerId hop = b; hop != 0; hop = ctx.parent.at(hop)) ctx.subtree[hop].insert(b);
    }
}

// Price a holder: m slots remain; B is the best m-sum the market can reach without i's
// subtree, A the best (m−1)-sum when i's direct children are added back.
Rat gidm_price(const GidmContext& ctx, BuyerId i, int m) {
    const std::set<BuyerId>& sub = ctx.subtree.at(i);
    std::vector<Rat> pool_a, pool_b;
    for (const auto& [b, p] : ctx.parent) {
        if (b == i || ctx.finalized.count(b)) continue;
        const bool in_subtree = sub.count(b) != 0;
        const bool is_child = ctx.parent.at(b) == i;
        if (!in_subtree || is_child) pool_a.push_back(ctx.value(b));
        if (!in_subtree) pool_b.push_back(ctx.value(b));
    }
    const Rat b_sum = top_sum(std::move(pool_b), m);
    const Rat a_sum = top_sum(std::move(pool_a), m - 1);
    const Rat price = b_sum - a_sum;
    return price.is_negative() ? Rat(0) : price;
}

void gidm_forward(GidmContext& ctx, BuyerId i, int remaining) {
    auto it = ctx.children.find(i);
    if (it != ctx.children.end()) {
        for (BuyerId child : it->second) {
            const int want = ctx.serve_in(ctx.subtree.at(child));
            const int give = std::min(want, remaining);
            if (give > 0) {
                ctx.holding[child] += give;
                remaining -= give;
                ctx.state.trace.push_back(
                    {GidmEvent::Kind::send, i, child, give, std::nullopt});
            }
        }
    }
    if (remaining > 0)  // nobody left below who is owed an item: back to the seller
        ctx.state.trace.push_back({GidmEvent::Kind::send, i, 0, remaining, std::nullopt});
}

void gidm_process(GidmContext& ctx, BuyerId i) {
    const int held = ctx.holding[i];
    if (held == 0) return;

    if (ctx.locked.count(i)) {
        gidm_forward(ctx, i, held);
        return;
    }

    const int m = ctx.k - static_cast<int>(ctx.finalized.size());
    const Rat price = gidm_price(ctx, i, m);
    bool trades = price < ctx.value(i);

    if (ctx.serve.count(i)) {
        if (trades) {
            ctx.serve.erase(i);
            ctx.finalized.insert(i);
            ctx.outcome.allocation[i] = 1;
            ctx.outcome.net_payment[i] = price;
            ctx.state.trace.push_back({GidmEvent::Kind::receive, i, 0, 1, price});
            gidm_forward(ctx, i, held - 1);
        } else {
            ctx.serve.erase(i);  // declining forfeits the reserved item
            ctx.state.trace.push_back({GidmEvent::Kind::decline, i, 0, 0, price});
            gidm_forward(ctx, i, held);
        }
        return;
    }

    if (trades) {
        // Take the item away from the least valuable buyer still owed one below.
        BuyerId victim = 0;
        for (BuyerId b : ctx.subtree.at(i)) {
            if (!ctx.serve.count(b)) continue;
            if (victim == 0 || ctx.value(b) < ctx.value(victim) ||
                (ctx.value(b) == ctx.value(victim) && b > victim))
                victim = b;
        }
        if (victim == 0)  // items only flow toward buyers still owed one
            throw std::logic_error("holder with no serve member below it");
        ctx.serve.erase(victim);
        if (ctx.parent.at(victim) == i) ctx.locked.insert(victim);
        ctx.finalized.insert(i);
        ctx.outcome.allocation[i] = 1;
        ctx.outcome.net_payment[i] = price;
        ctx.state.trace.push_back({GidmEvent::Kind::take_away, i, victim, 1, price});
        gidm_forward(ctx, i, held - 1);
    } else {
        ctx.state.trace.push_back({GidmEvent::Kind::decline, i, 0, 0, price});
        gidm_forward(ctx, i, held);
    }
}

}  // namespace

std::pair<Outcome, GidmTreeState> gidm_revised(const AuctionInstance& instance, int k) {
    if (k < 1) throw precondition_error("item count must be positive");

    GidmContext ctx;
    ctx.instance = &instance;
    ctx.k = k;

    const std::set<BuyerId> informed = informed_set(instance);
    gidm_build_tree(ctx, informed);
    const AlignedPath apg = build_apg(instance);

    // Serve set: the min(k, |informed|) best declared values, ties to the smaller id.
    {
        std::vector<BuyerId> ranked(informed.begin(), informed.end());
        std::sort(ranked.begin(), ranked.end(), [&](BuyerId a, BuyerId b) {
            const Rat va = ctx.value(a);
            const Rat vb = ctx.value(b);
            return va != vb ? va > vb : a < b;
        });
        const int take = std::min<int>(k, static_cast<int>(ranked.size()));
        ctx.serve.insert(ranked.begin(), ranked.begin() + take);
    }

    // Seed the branches, lightest first so short branches settle before heavy ones.
    std::vector<std::pair<int, BuyerId>> branches;
    for (BuyerId child : instance.seller_neighbors) {
        if (!informed.count(child)) continue;
        const int seed = ctx.serve_in(ctx.subtree.at(child));
        branches.emplace_back(seed, child);
        if (seed > 0) {
            ctx.holding[child] = seed;
            ctx.state.trace.push_back({GidmEvent::Kind::send, 0, child, seed, std::nullopt});
        }
    }
    std::sort(branches.begin(), branches.end());

    for (const auto& [seed, root] : branches) {
        std::vector<BuyerId> order(ctx.subtree.at(root).begin(), ctx.subtree.at(root).end());
        std::sort(order.begin(), order.end(), [&](BuyerId a, BuyerId b) {
            const int da = apg.bfs_distance.at(a);
            const int db = apg.bfs_distance.at(b);
            return da != db ? da < db : a < b;
        });
        for (BuyerId node : order) gidm_process(ctx, node);
    }

    for (const auto& [b, count] : ctx.outcome.allocation)
        ctx.state.trace.push_back(
            {GidmEvent::Kind::allocate, b, 0, count, ctx.outcome.net_payment.at(b)});
    ctx.state.parent = std::move(ctx.parent);
    ctx.state.fixed_allocations = std::move(ctx.finalized);
    for (const auto& [b, count] : ctx.outcome.allocation) ctx.state.holdings[b] = count;
    return {std::move(ctx.outcome), std::move(ctx.state)};
}

}  // namespace netauct
