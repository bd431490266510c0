// verifier.hpp — brute-force incentive auditing: enumerates valuation misreports and
// diffusion cuts, certifies strategy-proofness and individual rationality empirically,
// generates seeded instance corpora, and rebuilds the canned take-away counter-example.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "netauct/analysis.hpp"
#include "netauct/model.hpp"

namespace netauct {

// A mechanism failed while evaluating a deviation; carries the offending context.
class verifier_error : public std::runtime_error {
public:
    explicit verifier_error(const std::string& what) : std::runtime_error(what) {}
};

struct Deviation {
    BuyerId buyer = 0;
    std::vector<Rat> reported_valuations;   // non-increasing, within the cap
    std::set<BuyerId> reported_neighbors;   // subset of the true neighbor set
};

struct DeviationReport {
    BuyerId buyer = 0;
    Deviation deviation;
    std::size_t deviation_index = 0;  // position in deviation_set(instance, buyer)
    Rat truthful_utility;
    Rat deviant_utility;
    Rat gain;  // strictly positive
};

struct IrViolation {
    BuyerId buyer = 0;
    Rat utility;  // strictly negative, under truthful reporting
    std::optional<Deviation> rival_deviation;  // the rival report that induced it, if any
};

struct GridConfig {
    Rat epsilon{1, 1000};   // breakpoint perturbation
    int max_neighbors = 12; // refuse (rather than under-search) beyond 2^12 subsets
};

// Finite deviation basis for one buyer: every subset of her true neighbor set crossed
// with a valuation grid at the rivals' outcome breakpoints (their statistics, ± ε,
// α-scalings both ways, 0 and the cap). Mechanism outcomes are piecewise-constant in
// one report with breakpoints exactly at these statistics, so the grid reaches every
// outcome region; the unit tests audit that against a dense mesh sweep. The empty
// neighbor set comes first and the truthful valuation leads each subset's block.
std::vector<Deviation> deviation_set(const AuctionInstance& instance, BuyerId buyer,
                                     const GridConfig& config = {});

struct AuditResult {
    std::optional<DeviationReport> strategy_proof_violation;
    std::optional<IrViolation> ir_violation;
    std::size_t deviations_evaluated = 0;
};

// One pass over every (buyer, deviation): flags the first strictly profitable deviation
// (ordered by buyer id, then deviation index) and the first negative truthful utility
// seen on the declared profile or any single-rival deviation of it.
AuditResult audit(const MechanismFn& mechanism, const AuctionInstance& instance,
                  const GridConfig& config = {});

std::optional<DeviationReport> check_strategy_proof(const MechanismFn& mechanism,
                                                    const AuctionInstance& instance,
                                                    const GridConfig& config = {});

std::optional<IrViolation> check_ir(const MechanismFn& mechanism,
                                    const AuctionInstance& instance,
                                    const GridConfig& config = {});

struct GenParams {
    int n = 4;
    int k = 1;
    enum class Topology { path, star, random_tree, random_graph };
    Topology topology = Topology::random_tree;
    enum class ValueDist { uniform_int, unit_demand, zero };
    ValueDist dist = ValueDist::uniform_int;
    std::int64_t value_cap = 10;
    std::uint64_t seed = 0;
    int max_degree = 5;
    std::optional<Rat> alpha;  // stamped onto the instance for the single-item runs
};

// Deterministic per seed; every buyer reachable from the seller under full disclosure;
// declared profile equals the attached true profile (a truthful corpus instance).
AuctionInstance gen_instance(const GenParams& params);

// The seven-buyer take-away scenario; values are indexed a..g.
AuctionInstance make_gidm_scenario(const std::array<int, 7>& values_by_letter);

// The candidate counter-example instance. Before returning, replays both executor
// traces and the strategy-proofness scan and throws std::logic_error if any narrative
// constraint fails — a silent pass is worse than a loud stop.
AuctionInstance reconstruct_gidm_counterexample();

// All assignments of distinct integer values 1..max_value to the seven buyers that
// satisfy every narrative constraint under the implemented executor.
std::vector<std::array<int, 7>> search_gidm_counterexamples(int max_value = 10);

}  // namespace netauct
