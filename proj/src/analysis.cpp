#include "netauct/analysis.hpp"

#include <algorithm>

namespace netauct {

Rat optimal_welfare(const AuctionInstance& instance, int k) {
    std::vector<Rat> pooled;
    for (BuyerId b : informed_set(instance)) {
        const auto& vals = instance.truth(b).valuations;
        for (int l = 1; l <= k && l <= static_cast<int>(vals.size()); ++l)
            pooled.push_back(vals[static_cast<std::size_t>(l - 1)]);
    }
    const int take = std::min<int>(k, static_cast<int>(pooled.size()));
    std::partial_sort(pooled.begin(), pooled.begin() + take, pooled.end(),
                      [](const Rat& a, const Rat& b) { return a > b; });
    Rat total(0);
    for (int i = 0; i < take; ++i) total += pooled[static_cast<std::size_t>(i)];
    return total;
}

Rat achieved_welfare(const AuctionInstance& instance, const Outcome& outcome) {
    const std::set<BuyerId> informed = informed_set(instance);
    Rat total(0);
    for (const auto& [b, count] : outcome.allocation) {
        if (count == 0) continue;
        if (!informed.count(b))
            throw precondition_error("outcome allocates to uninformed buyer " +
                                     std::to_string(b));
        for (int l = 1; l <= count; ++l) total += instance.true_value(b, l);
    }
    return total;
}

Rat utility(const AuctionInstance& instance, BuyerId buyer, const Outcome& outcome) {
    Rat value(0);
    for (int l = 1; l <= outcome.items(buyer); ++l) value += instance.true_value(buyer, l);
    return value - outcome.payment(buyer);
}

WelfareReport welfare_report(const AuctionInstance& instance, int k, const Outcome& outcome) {
    WelfareReport report;
    report.achieved = achieved_welfare(instance, outcome);
    report.optimal = optimal_welfare(instance, k);
    report.ratio = report.optimal.is_zero() ? Rat(1) : report.achieved / report.optimal;
    return report;
}

RevenueReport revenue_report(const AuctionInstance& instance, const Outcome& outcome) {
    RevenueReport report;
    report.revenue = outcome.revenue();
    if (instance.value_cap && !instance.value_cap->is_zero() && instance.n >= 2)
        report.normalized =
            Rat(1) + report.revenue / (Rat(instance.n - 1) * *instance.value_cap);
    return report;
}

Rat empirical_efficiency(const MechanismFn& mechanism,
                         const std::vector<AuctionInstance>& corpus) {
    if (corpus.empty()) throw precondition_error("efficiency over an empty corpus");
    std::optional<Rat> worst;
    for (const AuctionInstance& instance : corpus) {
        const WelfareReport report =
            welfare_report(instance, instance.k, mechanism(instance));
        if (!worst || report.ratio < *worst) worst = report.ratio;
    }
    return *worst;
}

Rat empirical_beta(const MechanismFn& mechanism, const std::vector<AuctionInstance>& corpus,
                   const Rat& v_star) {
    if (corpus.empty()) throw precondition_error("budget-balance over an empty corpus");
    if (!(v_star > Rat(0))) throw precondition_error("budget-balance needs a positive cap");
    const int n = corpus.front().n;
    if (n < 2) throw precondition_error("budget-balance needs at least two buyers");
    std::optional<Rat> worst;
    for (const AuctionInstance& instance : corpus) {
        if (instance.n != n)
            throw precondition_error("budget-balance corpus must share one buyer count");
        const Rat revenue = mechanism(instance).revenue();
        if (!worst || revenue < *worst) worst = revenue;
    }
    return Rat(1) + *worst / (Rat(n - 1) * v_star);
}

}  // namespace netauct
