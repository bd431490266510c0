// acceptance_main.cpp — one end-to-end check per shipped guarantee, one PASS/FAIL
// line each. Exits nonzero if any line fails. Run from the repository root.
#include <chrono>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "netauct/analysis.hpp"
#include "netauct/io.hpp"
#include "netauct/mechanisms.hpp"
#include "netauct/verifier.hpp"
#include "netauct/witnesses.hpp"
#include "support/builders.hpp"
#include "support/welfare_enumeration.hpp"

using namespace netauct;
using Clock = std::chrono::steady_clock;

namespace {

double ms_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

std::string fmt_ms(double ms) {
    std::ostringstream out;
    if (ms < 1.0)
        out << std::fixed << std::setprecision(3) << ms << " ms";
    else if (ms < 10000.0)
        out << std::fixed << std::setprecision(1) << ms << " ms";
    else
        out << std::fixed << std::setprecision(1) << ms / 1000.0 << " s";
    return out.str();
}

// Every truthful (instance, outcome) pair produced below flows through here; criterion 8
// re-states the ledger: utilities plus revenue must reproduce achieved welfare exactly.
struct AccountingLedger {
    long pairs = 0;
    long failures = 0;

    void record(const AuctionInstance& instance, const Outcome& outcome) {
        Rat total(0);
        for (BuyerId b : informed_set(instance)) total += utility(instance, b, outcome);
        if (total + outcome.revenue() != achieved_welfare(instance, outcome)) ++failures;
        ++pairs;
    }
};

AccountingLedger ledger;

GenParams::Topology cycle_topology(std::uint64_t seed) {
    switch (seed % 4) {
        case 0: return GenParams::Topology::path;
        case 1: return GenParams::Topology::star;
        case 2: return GenParams::Topology::random_tree;
        default: return GenParams::Topology::random_graph;
    }
}

bool criterion1(std::string& line) {
    const AuctionInstance instance = testing::make_two_branch();
    double best = 1e9;
    AlignedPath apg;
    for (int rep = 0; rep < 2000; ++rep) {
        const auto t0 = Clock::now();
        apg = build_apg(instance);
        best = std::min(best, ms_between(t0, Clock::now()));
    }

    const std::vector<BuyerId> expected = {1, 6, 3, 5, 2, 4};
    const std::map<BuyerId, int> distances = {{1, 1}, {6, 1}, {3, 2},
                                              {5, 2}, {2, 3}, {4, 3}};
    bool ok = apg.order == expected && apg.bfs_distance == distances;
    for (std::size_t i = 0; i < expected.size() && ok; ++i)
        ok = apg.position.at(expected[i]) == static_cast<int>(i) + 1;
    ok = ok && best < 1.0;

    std::ostringstream out;
    out << "two-branch propagation order [1 6 3 5 2 4] with distances (1,1,2,2,3,3), "
        << "built in " << fmt_ms(best);
    line = out.str();
    return ok;
}

bool criterion2(std::string& line) {
    const auto t0 = Clock::now();
    const MechanismFn rule = [](const AuctionInstance& in) {
        return alpha_apg(in, *in.alpha).first;
    };

    long instances = 0;
    long deviations = 0;
    long violations = 0;
    std::string first_bad;
    for (const Rat& alpha : {Rat(1, 4), Rat(1, 2), Rat(3, 4)}) {
        for (std::uint64_t seed = 0; seed < 350; ++seed) {
            GenParams params;
            params.n = 2 + static_cast<int>(seed % 7);  // up to eight buyers
            params.seed = seed;
            params.topology = cycle_topology(seed);
            params.alpha = alpha;
            const AuctionInstance instance = gen_instance(params);
            const AuditResult result = audit(rule, instance);
            ++instances;
            deviations += static_cast<long>(result.deviations_evaluated);
            if (result.strategy_proof_violation || result.ir_violation) {
                ++violations;
                if (first_bad.empty()) {
                    std::ostringstream bad;
                    bad << " (first: alpha=" << alpha.to_string() << " seed=" << seed << ")";
                    first_bad = bad.str();
                }
            }
            ledger.record(instance, rule(instance));
        }
    }
    const double elapsed = ms_between(t0, Clock::now());

    std::ostringstream out;
    out << "single-item audits: " << instances << " instances, " << deviations
        << " deviations, " << violations << " incentive violations" << first_bad << " in "
        << fmt_ms(elapsed);
    line = out.str();
    return instances >= 1000 && violations == 0 && elapsed < 120000.0;
}

bool criterion3(std::string& line) {
    bool ok = true;
    for (const Rat& alpha : {Rat(1, 4), Rat(1, 2), Rat(3, 4)}) {
        const MechanismFn rule = [alpha](const AuctionInstance& in) {
            return alpha_apg(in, alpha).first;
        };
        const AuctionInstance eff = alpha_efficiency_witness(alpha, Rat(10));
        ok = ok && empirical_efficiency(rule, {eff}) == alpha;
        const AuctionInstance beta = alpha_beta_witness(alpha, Rat(10));
        ok = ok && empirical_beta(rule, {beta}, Rat(10)) == Rat(1) - alpha;
        ledger.record(eff, rule(eff));
        ledger.record(beta, rule(beta));
    }
    line = "single-item worst cases: efficiency witness at exactly alpha, five-buyer "
           "relay chain at balance exactly 1-alpha, for alpha in {1/4, 1/2, 3/4}";
    return ok;
}

bool criterion4(std::string& line) {
    const auto t0 = Clock::now();
    long instances = 0;
    long violations = 0;
    long ratio_breaches = 0;
    bool witness_exact = true;

    for (const int k : {2, 4, 6, 9}) {
        const MechanismFn rule = [k](const AuctionInstance& in) { return gapg(in, k); };
        const Rat floor(nk_of(k), k);

        const AuctionInstance flat = gapg_flat_witness(k, Rat(10));
        witness_exact = witness_exact && welfare_report(flat, k, rule(flat)).ratio == floor;
        ledger.record(flat, rule(flat));

        for (std::uint64_t seed = 0; seed < 250; ++seed) {
            GenParams params;
            params.n = 2 + static_cast<int>(seed % 5);  // up to six buyers
            params.k = k;
            params.seed = seed;
            params.topology = cycle_topology(seed);
            params.max_degree = 4;
            const AuctionInstance instance = gen_instance(params);
            const AuditResult result = audit(rule, instance);
            ++instances;
            if (result.strategy_proof_violation || result.ir_violation) ++violations;
            const Outcome outcome = rule(instance);
            if (welfare_report(instance, k, outcome).ratio < floor) ++ratio_breaches;
            ledger.record(instance, outcome);
        }
    }
    const double elapsed = ms_between(t0, Clock::now());

    std::ostringstream out;
    out << "multi-item audits: " << instances << " instances, " << violations
        << " incentive violations, " << ratio_breaches
        << " below the sqrt-share floor, flat witness "
        << (witness_exact ? "exact" : "NOT exact") << ", in " << fmt_ms(elapsed);
    line = out.str();
    return instances >= 1000 && violations == 0 && ratio_breaches == 0 && witness_exact &&
           elapsed < 180000.0;
}

bool criterion5(std::string& line) {
    const AuctionInstance instance = reconstruct_gidm_counterexample();
    const auto [truthful, truthful_state] = gidm_revised(instance, 4);
    bool ok = truthful.payment(4) == Rat(3)   // c trades at 3
              && truthful.items(4) == 1
              && truthful.items(1) == 0       // d only relays
              && utility(instance, 1, truthful) == Rat(0)
              && truthful.revenue() == Rat(10);
    ledger.record(instance, truthful);

    AuctionInstance cut = instance;
    cut.buyers.at(1).neighbors.clear();  // d withholds its only out-link
    const auto [after, after_state] = gidm_revised(cut, 4);
    bool declined_at_6 = false;
    for (const GidmEvent& ev : after_state.trace)
        if (ev.kind == GidmEvent::Kind::decline && ev.actor == 4 && ev.price &&
            *ev.price == Rat(6))
            declined_at_6 = true;
    ok = ok && declined_at_6 && after.items(1) == 1 && after.payment(1) == Rat(6) &&
         utility(cut, 1, after) == Rat(1) && after.revenue() == Rat(8);
    ledger.record(cut, after);

    const MechanismFn rule = [](const AuctionInstance& in) {
        return gidm_revised(in, in.k).first;
    };
    const auto violation = check_strategy_proof(rule, instance);
    ok = ok && violation && violation->buyer == 1 &&
         violation->deviation.reported_neighbors.empty() && violation->gain == Rat(1);

    line = "seven-buyer take-away run: c pays 3 truthfully and declines at 6 after d's "
           "cut; d gains 1 and the deviation scan names d";
    return ok;
}

bool criterion6(std::string& line) {
    long instances = 0;
    long ratio_off = 0;
    long violations = 0;
    for (const int k : {1, 2, 3}) {
        const MechanismFn rule = [k](const AuctionInstance& in) {
            return gapg_top_k_unit(in, k);
        };
        for (std::uint64_t seed = 0; seed < 150; ++seed) {
            GenParams params;
            params.n = 2 + static_cast<int>(seed % 5);
            params.k = k;
            params.seed = seed;
            params.topology = cycle_topology(seed);
            params.dist = GenParams::ValueDist::unit_demand;
            params.max_degree = 4;
            const AuctionInstance instance = gen_instance(params);
            ++instances;
            const Outcome outcome = rule(instance);
            if (welfare_report(instance, k, outcome).ratio != Rat(1)) ++ratio_off;
            if (check_strategy_proof(rule, instance)) ++violations;
            ledger.record(instance, outcome);
        }
    }

    std::ostringstream out;
    out << "unit-demand top-k: " << instances << " instances, " << ratio_off
        << " off the exact welfare optimum, " << violations << " profitable deviations";
    line = out.str();
    return ratio_off == 0 && violations == 0;
}

bool criterion7(std::string& line) {
    long cases = 0;
    long mismatches = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        GenParams params;
        params.n = 2 + static_cast<int>(seed % 3);  // at most four buyers
        params.k = 1 + static_cast<int>(seed % 4);
        params.seed = seed;
        params.topology = cycle_topology(seed);
        const AuctionInstance instance = gen_instance(params);
        ++cases;
        if (optimal_welfare(instance, params.k) !=
            testing::enumerate_optimal_welfare(instance, params.k))
            ++mismatches;
        ledger.record(instance, gapg(instance, params.k));
    }

    std::ostringstream out;
    out << "greedy welfare optimum equals exhaustive enumeration on " << cases
        << " small instances (" << mismatches << " mismatches)";
    line = out.str();
    return cases >= 200 && mismatches == 0;
}

bool criterion8(std::string& line) {
    std::ostringstream out;
    out << "utilities plus revenue reproduce achieved welfare on all " << ledger.pairs
        << " recorded runs (" << ledger.failures << " off)";
    line = out.str();
    return ledger.pairs > 0 && ledger.failures == 0;
}

bool negative_revenue_demo(std::string& line) {
    const AuctionInstance instance =
        testing::make_chain({Rat(0), Rat(8)}, 1, Rat(3, 4), Rat(10));
    const Outcome outcome = alpha_apg(instance, Rat(3, 4)).first;
    const WelfareReport welfare = welfare_report(instance, 1, outcome);
    const bool ok = outcome.revenue() == Rat(-6) && welfare.ratio == Rat(1) &&
                    utility(instance, 1, outcome) == Rat(6) &&
                    utility(instance, 2, outcome) == Rat(8);
    line = "two-buyer chain at alpha=3/4 with values (0, 8): efficient, individually "
           "rational, revenue -6";
    return ok;
}

}  // namespace

int main() {
    int failures = 0;
    const auto report = [&](const std::string& name, bool (*check)(std::string&)) {
        std::string line;
        bool ok = false;
        try {
            ok = check(line);
        } catch (const std::exception& e) {
            line += std::string(line.empty() ? "" : "; ") + "exception: " + e.what();
        }
        if (!ok) ++failures;
        std::cout << (ok ? "PASS " : "FAIL ") << name << " — " << line << "\n";
    };

    report("criterion 1", criterion1);
    report("criterion 2", criterion2);
    report("criterion 3", criterion3);
    report("criterion 4", criterion4);
    report("criterion 5", criterion5);
    report("criterion 6", criterion6);
    report("criterion 7", criterion7);
    report("criterion 8", criterion8);
    report("demo", negative_revenue_demo);

    if (failures == 0)
        std::cout << "all acceptance checks passed\n";
    else
        std::cout << failures << " acceptance check(s) failed\n";
    return failures == 0 ? 0 : 1;
}
