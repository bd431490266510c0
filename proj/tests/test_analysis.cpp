#include <doctest.h>

#include "netauct/analysis.hpp"
#include "netauct/mechanisms.hpp"
#include "netauct/verifier.hpp"
#include "netauct/witnesses.hpp"
#include "support/builders.hpp"
#include "support/welfare_enumeration.hpp"

using namespace netauct;
using testing::make_chain;

namespace {

AuctionInstance gapg_example() {
    return make_chain(
        std::vector<std::vector<Rat>>{{Rat(5), Rat(3)}, {Rat(6), Rat(1)}, {Rat(4), Rat(4)}},
        4);
}

}  // namespace

TEST_CASE("optimal welfare pools the best marginals across informed buyers") {
    CHECK(optimal_welfare(gapg_example(), 4) == Rat(19));  // 6+5+4+4

    const auto flat = make_chain(
        std::vector<std::vector<Rat>>{{Rat(3), Rat(3), Rat(3), Rat(3), Rat(3)}}, 5);
    CHECK(optimal_welfare(flat, 5) == Rat(15));

    AuctionInstance empty_market;
    empty_market.n = 1;
    empty_market.buyers[1] = BuyerType{{Rat(9)}, {}};  // unreachable: no seller link
    validate_instance(empty_market);
    CHECK(optimal_welfare(empty_market, 3) == Rat(0));
}

TEST_CASE("greedy optimum matches exhaustive enumeration on small instances") {
    int cases = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        for (int k : {1, 2, 3, 4}) {
            GenParams params;
            params.n = 1 + static_cast<int>(seed % 4);
            params.k = k;
            params.seed = seed * 31 + static_cast<std::uint64_t>(k);
            params.topology = seed % 2 == 0 ? GenParams::Topology::random_tree
                                            : GenParams::Topology::random_graph;
            const AuctionInstance instance = gen_instance(params);
            CHECK(optimal_welfare(instance, k) ==
                  testing::enumerate_optimal_welfare(instance, k));
            ++cases;
        }
    }
    CHECK(cases == 200);
}

TEST_CASE("achieved welfare reads true marginal values off the allocation") {
    const AuctionInstance instance = gapg_example();
    const Outcome outcome = gapg(instance, 4);
    CHECK(achieved_welfare(instance, outcome) == Rat(16));  // 8 + 8

    CHECK(achieved_welfare(instance, Outcome{}) == Rat(0));

    Outcome to_uninformed;
    to_uninformed.allocation[2] = 1;
    AuctionInstance cut = instance;
    cut.buyers.at(1).neighbors.clear();
    CHECK_THROWS_AS(achieved_welfare(cut, to_uninformed), precondition_error);
}

TEST_CASE("utility is quasi-linear in the true values") {
    const auto instance = make_chain({Rat(4), Rat(10)});
    Outcome outcome;
    outcome.allocation[2] = 1;
    outcome.net_payment[2] = Rat(4);
    outcome.net_payment[1] = Rat(-5);
    CHECK(utility(instance, 2, outcome) == Rat(6));
    CHECK(utility(instance, 1, outcome) == Rat(5));

    // Reported values do not enter utilities: misreporting buyer 2 still nets its
    // true surplus.
    AuctionInstance lied = instance;
    lied.buyers.at(2).valuations = {Rat(7)};
    CHECK(utility(lied, 2, outcome) == Rat(6));
}

TEST_CASE("welfare report carries the exact ratio, degenerate optimum included") {
    const AuctionInstance instance = gapg_example();
    const WelfareReport report = welfare_report(instance, 4, gapg(instance, 4));
    CHECK(report.achieved == Rat(16));
    CHECK(report.optimal == Rat(19));
    CHECK(report.ratio == Rat(16, 19));

    const auto zero = make_chain({Rat(0), Rat(0)});
    const WelfareReport degenerate =
        welfare_report(zero, 1, alpha_apg(zero, Rat(1, 2)).first);
    CHECK(degenerate.achieved == Rat(0));
    CHECK(degenerate.optimal == Rat(0));
    CHECK(degenerate.ratio == Rat(1));
}

TEST_CASE("revenue report normalizes only when the reference scale exists") {
    const auto instance = make_chain({Rat(4), Rat(10)}, 1, Rat(1, 2), Rat(10));
    const RevenueReport report =
        revenue_report(instance, alpha_apg(instance, Rat(1, 2)).first);
    CHECK(report.revenue == Rat(3));
    REQUIRE(report.normalized.has_value());
    CHECK(*report.normalized == Rat(13, 10));  // 1 + 3/(1*10)

    const auto uncapped = make_chain({Rat(4), Rat(10)});
    CHECK_FALSE(revenue_report(uncapped, alpha_apg(uncapped, Rat(1, 2)).first)
                    .normalized.has_value());

    const auto single = make_chain({Rat(4)}, 1, std::nullopt, Rat(10));
    CHECK_FALSE(revenue_report(single, alpha_apg(single, Rat(1, 2)).first)
                    .normalized.has_value());
}

TEST_CASE("witness families pin the empirical minima exactly") {
    const Rat cap(10);
    for (const Rat& alpha : {Rat(1, 4), Rat(1, 2), Rat(3, 4)}) {
        const MechanismFn mech = [alpha](const AuctionInstance& inst) {
            return alpha_apg(inst, alpha).first;
        };
        std::vector<AuctionInstance> efficiency_corpus{
            alpha_efficiency_witness(alpha, cap)};
        std::vector<AuctionInstance> beta_corpus{alpha_beta_witness(alpha, cap)};
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            GenParams p;
            p.n = 4;
            p.alpha = alpha;
            p.seed = seed;
            efficiency_corpus.push_back(gen_instance(p));
            GenParams q;
            q.n = 5;
            q.topology = GenParams::Topology::path;
            q.alpha = alpha;
            q.seed = seed + 977;
            beta_corpus.push_back(gen_instance(q));
        }
        CHECK(empirical_efficiency(mech, efficiency_corpus) == alpha);
        CHECK(empirical_beta(mech, beta_corpus, cap) == Rat(1) - alpha);
    }

    for (int k : {1, 4, 9}) {
        const MechanismFn mech = [](const AuctionInstance& inst) {
            return gapg(inst, inst.k);
        };
        const std::vector<AuctionInstance> corpus{gapg_flat_witness(k, cap)};
        CHECK(empirical_efficiency(mech, corpus) == Rat(nk_of(k), k));
    }
}

TEST_CASE("empirical aggregates reject unusable corpora") {
    const MechanismFn mech = [](const AuctionInstance& inst) {
        return alpha_apg(inst, Rat(1, 2)).first;
    };
    CHECK_THROWS_AS(empirical_efficiency(mech, {}), precondition_error);
    CHECK_THROWS_AS(empirical_beta(mech, {}, Rat(10)), precondition_error);

    const std::vector<AuctionInstance> pair = {make_chain({Rat(1), Rat(2)}),
                                               make_chain({Rat(1), Rat(2), Rat(3)})};
    CHECK_THROWS_AS(empirical_beta(mech, pair, Rat(10)), precondition_error);

    const std::vector<AuctionInstance> ok = {make_chain({Rat(1), Rat(2)})};
    CHECK_THROWS_AS(empirical_beta(mech, ok, Rat(0)), precondition_error);
    const auto lone = make_chain({Rat(5)});
    CHECK_THROWS_AS(empirical_beta(mech, {lone}, Rat(10)), precondition_error);
}

TEST_CASE("zero-value corpora count as fully efficient by convention") {
    std::vector<AuctionInstance> corpus;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        GenParams params;
        params.n = 3;
        params.dist = GenParams::ValueDist::zero;
        params.seed = seed;
        corpus.push_back(gen_instance(params));
    }
    const MechanismFn mech = [](const AuctionInstance& inst) {
        return alpha_apg(inst, Rat(1, 2)).first;
    };
    CHECK(empirical_efficiency(mech, corpus) == Rat(1));
    CHECK(empirical_beta(mech, corpus, Rat(10)) == Rat(1));  // zero revenue floor
}

TEST_CASE("per-instance efficiency floors hold on random corpora") {
    for (std::uint64_t seed = 300; seed < 340; ++seed) {
        GenParams params;
        params.n = 5;
        params.seed = seed;

        for (const Rat& alpha : {Rat(1, 4), Rat(3, 4)}) {
            params.k = 1;
            params.alpha = alpha;
            const AuctionInstance instance = gen_instance(params);
            const WelfareReport report =
                welfare_report(instance, 1, alpha_apg(instance, alpha).first);
            CHECK(report.ratio >= alpha);
            CHECK(report.ratio <= Rat(1));
            CHECK(report.achieved <= report.optimal);
        }
        for (int k : {2, 4, 9}) {
            params.k = k;
            params.alpha.reset();
            const AuctionInstance instance = gen_instance(params);
            const WelfareReport report =
                welfare_report(instance, k, gapg(instance, k));
            CHECK(report.ratio >= Rat(nk_of(k), k));
            CHECK(report.ratio <= Rat(1));
        }
    }
}

TEST_CASE("transfers account exactly: utilities plus revenue equal achieved welfare") {
    for (std::uint64_t seed = 400; seed < 430; ++seed) {
        GenParams params;
        params.n = 5;
        params.seed = seed;

        std::vector<std::pair<AuctionInstance, Outcome>> runs;
        params.k = 1;
        params.alpha = Rat(2, 3);
        AuctionInstance single = gen_instance(params);
        runs.emplace_back(single, alpha_apg(single, Rat(2, 3)).first);

        params.k = 4;
        params.alpha.reset();
        AuctionInstance multi = gen_instance(params);
        runs.emplace_back(multi, gapg(multi, 4));

        params.dist = GenParams::ValueDist::unit_demand;
        params.topology = GenParams::Topology::random_tree;
        AuctionInstance unit = gen_instance(params);
        runs.emplace_back(unit, gapg_top_k_unit(unit, 4));
        runs.emplace_back(unit, gapg_top_k_unit(unit, 4, LoserTransfer::max_statistic));
        runs.emplace_back(unit, gidm_revised(unit, 4).first);

        for (const auto& [instance, outcome] : runs) {
            Rat total_utility(0);
            for (BuyerId buyer = 1; buyer <= instance.n; ++buyer)
                total_utility += utility(instance, buyer, outcome);
            CHECK(total_utility + outcome.revenue() == achieved_welfare(instance, outcome));
        }
    }
}
