#include "netauct/verifier.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "netauct/mechanisms.hpp"

namespace netauct {

namespace {

// Insert v and v ± ε, dropping anything negative or beyond the cap.
void add_with_perturbations(std::set<Rat>& grid, const Rat& v, const Rat& eps,
                            const std::optional<Rat>& cap) {
    for (const Rat& candidate : {v - eps, v, v + eps}) {
        if (candidate.is_negative()) continue;
        if (cap && candidate > *cap) continue;
        grid.insert(candidate);
    }
}

std::vector<Rat> scalar_grid(const AuctionInstance& instance, BuyerId buyer,
                             const GridConfig& config) {
    const std::optional<Rat>& cap = instance.value_cap;
    std::set<Rat> grid;
    grid.insert(Rat(0));
    if (cap) grid.insert(*cap);
    for (BuyerId rival : informed_set(instance)) {
        if (rival == buyer) continue;
        const Rat s = instance.declared_value(rival, 1);
        add_with_perturbations(grid, s, config.epsilon, cap);
        if (instance.alpha) {
            // Crossing α·s moves the buyer in or out of the candidate set; crossing
            // s/α ejects the rival from it once the buyer holds the top report.
            add_with_perturbations(grid, *instance.alpha * s, config.epsilon, cap);
            add_with_perturbations(grid, s / *instance.alpha, config.epsilon, cap);
        }
    }
    return {grid.begin(), grid.end()};
}

// Non-increasing vector with the given prefix sum: `width` equal coordinates.
std::optional<std::vector<Rat>> flat_vector(const Rat& sum, int width,
                                            const std::optional<Rat>& cap) {
    std::vector<Rat> vec(static_cast<std::size_t>(width), sum / Rat(width));
    if (cap && vec.front() > *cap) return std::nullopt;
    return vec;
}

// Non-increasing vector with the given prefix sum, loading early coordinates first.
std::optional<std::vector<Rat>> front_loaded_vector(const Rat& sum, int width,
                                                    const std::optional<Rat>& cap) {
    std::vector<Rat> vec;
    Rat remaining = sum;
    Rat limit = cap ? *cap : sum;
    for (int i = 0; i < width; ++i) {
        const Rat coord = remaining < limit ? remaining : limit;
        vec.push_back(coord);
        remaining -= coord;
        limit = coord;
    }
    if (!remaining.is_zero()) return std::nullopt;  // sum not realizable under the cap
    return vec;
}

std::vector<std::vector<Rat>> multi_item_vectors(const AuctionInstance& instance,
                                                 BuyerId buyer, const GridConfig& config) {
    const std::optional<Rat>& cap = instance.value_cap;
    const int nk = nk_of(instance.k);

    std::set<Rat> sums;
    std::set<Rat> firsts;
    sums.insert(Rat(0));
    firsts.insert(Rat(0));
    if (cap) {
        sums.insert(*cap * Rat(nk));
        firsts.insert(*cap);
    }
    for (BuyerId rival : informed_set(instance)) {
        if (rival == buyer) continue;
        Rat prefix(0);
        for (int l = 1; l <= nk; ++l) prefix += instance.declared_value(rival, l);
        add_with_perturbations(sums, prefix, config.epsilon,
                               cap ? std::optional<Rat>(*cap * Rat(nk)) : std::nullopt);
        add_with_perturbations(firsts, instance.declared_value(rival, 1), config.epsilon, cap);
    }

    std::set<std::vector<Rat>> vectors;
    for (const Rat& target : sums) {
        if (auto flat = flat_vector(target, nk, cap)) {
            vectors.insert(*flat);
            if (instance.k > nk && !flat->front().is_zero()) {
                // Tail coordinates carried at the plateau value: exercises the rule that
                // only the top-n_k prefix may matter.
                std::vector<Rat> carried(*flat);
                carried.resize(static_cast<std::size_t>(instance.k), flat->back());
                vectors.insert(std::move(carried));
            }
        }
        if (auto front = front_loaded_vector(target, nk, cap)) vectors.insert(*front);
    }
    for (const Rat& f : firsts) vectors.insert(std::vector<Rat>{f});
    return {vectors.begin(), vectors.end()};
}

}  // namespace

std::vector<Deviation> deviation_set(const AuctionInstance& instance, BuyerId buyer,
                                     const GridConfig& config) {
    const BuyerType& truth = instance.truth(buyer);
    if (static_cast<int>(truth.neighbors.size()) > config.max_neighbors)
        throw precondition_error(
            "buyer " + std::to_string(buyer) + " has " +
            std::to_string(truth.neighbors.size()) +
            " neighbors; refusing to enumerate beyond 2^" +
            std::to_string(config.max_neighbors) + " subsets");

    std::vector<std::vector<Rat>> vectors;
    if (instance.k == 1) {
        for (const Rat& v : scalar_grid(instance, buyer, config))
            vectors.push_back(std::vector<Rat>{v});
    } else {
        vectors = multi_item_vectors(instance, buyer, config);
    }
    // Truthful declaration first so the reported deviation on a violation is the most
    // readable representative of its region.
    const std::vector<Rat>& declared = instance.declared(buyer).valuations;
    std::erase(vectors, declared);
    vectors.insert(vectors.begin(), declared);

    std::vector<BuyerId> edges(truth.neighbors.begin(), truth.neighbors.end());
    std::vector<Deviation> deviations;
    deviations.reserve((std::size_t{1} << edges.size()) * vectors.size());
    for (std::size_t mask = 0; mask < (std::size_t{1} << edges.size()); ++mask) {
        std::set<BuyerId> subset;
        for (std::size_t b = 0; b < edges.size(); ++b)
            if (mask & (std::size_t{1} << b)) subset.insert(edges[b]);
        for (const auto& vec : vectors)
            deviations.push_back(Deviation{buyer, vec, subset});
    }
    return deviations;
}

AuditResult audit(const MechanismFn& mechanism, const AuctionInstance& instance,
                  const GridConfig& config) {
    AuctionInstance base = instance;
    if (!base.true_profile) base.true_profile = base.buyers;

    AuditResult result;
    Outcome truthful;
    try {
        truthful = mechanism(base);
    } catch (const std::exception& e) {
        throw verifier_error(std::string("mechanism failed on the declared profile: ") +
                             e.what());
    }

    const std::set<BuyerId> informed = informed_set(base);
    std::map<BuyerId, Rat> truthful_utility;
    for (BuyerId b : informed) {
        const Rat u = utility(base, b, truthful);
        truthful_utility[b] = u;
        if (u.is_negative() && !result.ir_violation)
            result.ir_violation = IrViolation{b, u, std::nullopt};
    }

    for (BuyerId deviator : informed) {
        const std::vector<Deviation> deviations = deviation_set(base, deviator, config);
        for (std::size_t idx = 0; idx < deviations.size(); ++idx) {
            const Deviation& dev = deviations[idx];
            AuctionInstance deviant = base;
            BuyerType& report = deviant.buyers.at(deviator);
            report.valuations = dev.reported_valuations;
            report.neighbors = dev.reported_neighbors;

            Outcome outcome;
            try {
                outcome = mechanism(deviant);
            } catch (const precondition_error&) {
                // The mechanism refuses this report outright (e.g. a multi-unit claim
                // into a unit-demand rule), so it is not an available deviation.
                continue;
            } catch (const std::exception& e) {
                throw verifier_error("mechanism failed on a deviation of buyer " +
                                     std::to_string(deviator) + " (deviation " +
                                     std::to_string(idx) + "): " + e.what());
            }
            ++result.deviations_evaluated;

            if (!result.strategy_proof_violation) {
                const Rat u = utility(deviant, deviator, outcome);
                const Rat gain = u - truthful_utility.at(deviator);
                if (gain > Rat(0))
                    result.strategy_proof_violation = DeviationReport{
                        deviator, dev, idx, truthful_utility.at(deviator), u, gain};
            }
            if (!result.ir_violation) {
                // The deviant profile doubles as a sampled rival profile for everyone
                // else: truthful participation must still not lose money.
                for (BuyerId b : informed) {
                    if (b == deviator) continue;
                    const Rat u = utility(deviant, b, outcome);
                    if (u.is_negative()) {
                        result.ir_violation = IrViolation{b, u, dev};
                        break;
                    }
                }
            }
            if (result.strategy_proof_violation && result.ir_violation) break;
        }
        if (result.strategy_proof_violation && result.ir_violation) break;
    }
    return result;
}

std::optional<DeviationReport> check_strategy_proof(const MechanismFn& mechanism,
                                                    const AuctionInstance& instance,
                                                    const GridConfig& config) {
    return audit(mechanism, instance, config).strategy_proof_violation;
}

std::optional<IrViolation> check_ir(const MechanismFn& mechanism,
                                    const AuctionInstance& instance,
                                    const GridConfig& config) {
    return audit(mechanism, instance, config).ir_violation;
}

namespace {

std::vector<Rat> draw_valuations(std::mt19937_64& rng, const GenParams& params) {
    const std::uint64_t span = static_cast<std::uint64_t>(params.value_cap) + 1;
    switch (params.dist) {
        case GenParams::ValueDist::zero:
            return {Rat(0)};
        case GenParams::ValueDist::unit_demand:
            return {Rat(static_cast<std::int64_t>(rng() % span))};
        case GenParams::ValueDist::uniform_int: {
            std::vector<Rat> vals;
            for (int l = 0; l < params.k; ++l)
                vals.push_back(Rat(static_cast<std::int64_t>(rng() % span)));
            std::sort(vals.begin(), vals.end(), [](const Rat& a, const Rat& b) { return a > b; });
            return vals;
        }
    }
    throw input_error("unknown value distribution");
}

}  // namespace

AuctionInstance gen_instance(const GenParams& params) {
    if (params.n < 1) throw precondition_error("generator needs at least one buyer");
    if (params.k < 1) throw precondition_error("generator needs a positive item count");
    if (params.value_cap < 0) throw precondition_error("generator needs a non-negative cap");
    // Values are drawn with modulo reduction rather than uniform_int_distribution: the
    // latter's output sequence is implementation-defined, and identical seeds must mean
    // identical corpora everywhere.
    std::mt19937_64 rng(params.seed);

    AuctionInstance instance;
    instance.n = params.n;
    instance.k = params.k;
    instance.value_cap = Rat(params.value_cap);
    instance.alpha = params.alpha;

    for (BuyerId b = 1; b <= params.n; ++b) instance.buyers[b] = BuyerType{};

    auto add_edge = [&](BuyerId from, BuyerId to) {
        if (from == 0) instance.seller_neighbors.insert(to);
        else instance.buyers.at(from).neighbors.insert(to);
    };
    auto degree = [&](BuyerId who) {
        return who == 0 ? static_cast<int>(instance.seller_neighbors.size())
                        : static_cast<int>(instance.buyers.at(who).neighbors.size());
    };

    switch (params.topology) {
        case GenParams::Topology::path:
            add_edge(0, 1);
            for (BuyerId b = 1; b < params.n; ++b) add_edge(b, b + 1);
            break;
        case GenParams::Topology::star:
            for (BuyerId b = 1; b <= params.n; ++b) add_edge(0, b);
            break;
        case GenParams::Topology::random_tree:
        case GenParams::Topology::random_graph: {
            for (BuyerId b = 1; b <= params.n; ++b) {
                std::vector<BuyerId> eligible;
                for (BuyerId p = 0; p < b; ++p)
                    if (degree(p) < params.max_degree) eligible.push_back(p);
                if (eligible.empty())
                    throw precondition_error("degree bound too tight to build a tree");
                add_edge(eligible[rng() % eligible.size()], b);
            }
            if (params.topology == GenParams::Topology::random_graph) {
                for (BuyerId i = 1; i <= params.n; ++i)
                    for (BuyerId j = 1; j <= params.n; ++j) {
                        if (i == j) continue;
                        const bool coin = rng() % 5 == 0;
                        if (coin && degree(i) < params.max_degree &&
                            !instance.buyers.at(i).neighbors.count(j))
                            add_edge(i, j);
                    }
            }
            break;
        }
        default:
            throw input_error("unknown topology");
    }

    for (BuyerId b = 1; b <= params.n; ++b)
        instance.buyers.at(b).valuations = draw_valuations(rng, params);
    instance.true_profile = instance.buyers;
    validate_instance(instance);
    return instance;
}

namespace {

// Canonical buyer ids for the seven-buyer scenario. The ids are chosen so the
// deviation scan, which reports the first violation by (buyer id, deviation index),
// lands on buyer d — the buyer whose out-edge cut the scenario is about.
constexpr BuyerId kD = 1, kA = 2, kB = 3, kC = 4, kE = 5, kF = 6, kG = 7;

std::set<BuyerId> top_four(const AuctionInstance& instance,
                           const std::set<BuyerId>& informed) {
    std::vector<BuyerId> ranked(informed.begin(), informed.end());
    std::sort(ranked.begin(), ranked.end(), [&](BuyerId a, BuyerId b) {
        const Rat va = instance.declared_value(a, 1);
        const Rat vb = instance.declared_value(b, 1);
        return va != vb ? va > vb : a < b;
    });
    if (ranked.size() > 4) ranked.resize(4);
    return {ranked.begin(), ranked.end()};
}

void require(bool ok, const std::string& what) {
    if (!ok) throw std::logic_error("counter-example constraint failed: " + what);
}

// Replays both executor traces and the deviation scan against every constraint the
// scenario narrative pins down.
void verify_gidm_narrative(const AuctionInstance& instance) {
    const int k = 4;
    const auto [truthful_outcome, truthful_state] = gidm_revised(instance, k);

    const std::set<BuyerId> informed = informed_set(instance);
    require(informed.size() == 7, "all seven buyers informed under truth");
    const std::set<BuyerId> best = top_four(instance, informed);
    require(best == std::set<BuyerId>{kC, kD, kE, kG}, "truthful top four are {c,d,e,g}");
    for (BuyerId b : best)
        require(instance.declared_value(kC, 1) <= instance.declared_value(b, 1),
                "c is the smallest of the truthful top four");

    bool saw_take = false;
    for (const GidmEvent& ev : truthful_state.trace) {
        if (ev.kind == GidmEvent::Kind::take_away && ev.actor == kC) {
            require(ev.target == kD, "c takes the item away from d");
            require(ev.price && *ev.price == Rat(3), "c's take-away price is 3");
            saw_take = true;
        }
    }
    require(saw_take, "c performs a take-away in the truthful trace");
    require(utility(instance, kD, truthful_outcome).is_zero(), "d's truthful utility is 0");

    AuctionInstance cut = instance;
    cut.buyers.at(kD).neighbors.clear();
    const std::set<BuyerId> cut_informed = informed_set(cut);
    require(!cut_informed.count(kE), "cutting d's out-edge leaves e uninformed");
    require(top_four(cut, cut_informed) == std::set<BuyerId>{kC, kD, kF, kG},
            "after the cut the top four are {c,d,f,g}");

    const auto [cut_outcome, cut_state] = gidm_revised(cut, k);
    bool saw_decline = false, saw_receive = false;
    for (const GidmEvent& ev : cut_state.trace) {
        if (ev.kind == GidmEvent::Kind::decline && ev.actor == kC) {
            require(ev.price && *ev.price == Rat(6), "c's price after the cut is 6");
            saw_decline = true;
        }
        if (ev.kind == GidmEvent::Kind::receive && ev.actor == kC) saw_receive = true;
    }
    require(saw_decline, "c declines after the cut");
    require(!saw_receive, "c stays out after declining");
    require(cut_outcome.items(kD) == 1, "d obtains an item after the cut");
    require(cut_outcome.payment(kD) == Rat(6), "d pays 6 after the cut");
    require(utility(cut, kD, cut_outcome) > Rat(0), "d's post-cut utility is positive");

    const auto report = check_strategy_proof(
        [k](const AuctionInstance& inst) { return gidm_revised(inst, k).first; }, instance);
    require(report.has_value(), "the deviation scan finds a violation");
    require(report->buyer == kD, "the deviation scan names buyer d");
}

}  // namespace

AuctionInstance make_gidm_scenario(const std::array<int, 7>& values_by_letter) {
    const auto& [va, vb, vc, vd, ve, vf, vg] = values_by_letter;
    AuctionInstance instance;
    instance.n = 7;
    instance.k = 4;
    instance.value_cap = Rat(10);
    instance.seller_neighbors = {kA, kF};
    auto buyer = [&](BuyerId id, int value, std::set<BuyerId> neighbors) {
        instance.buyers[id] = BuyerType{{Rat(value)}, std::move(neighbors)};
    };
    buyer(kA, va, {kB});
    buyer(kB, vb, {kC, kG});
    buyer(kC, vc, {kD});
    buyer(kD, vd, {kE});
    buyer(kE, ve, {});
    buyer(kF, vf, {});
    buyer(kG, vg, {});
    instance.labels = {{kA, "a"}, {kB, "b"}, {kC, "c"}, {kD, "d"},
                       {kE, "e"}, {kF, "f"}, {kG, "g"}};
    instance.true_profile = instance.buyers;
    validate_instance(instance);
    return instance;
}

AuctionInstance reconstruct_gidm_counterexample() {
    AuctionInstance instance = make_gidm_scenario({1, 2, 5, 7, 8, 4, 6});
    verify_gidm_narrative(instance);
    return instance;
}

std::vector<std::array<int, 7>> search_gidm_counterexamples(int max_value) {
    std::vector<std::array<int, 7>> found;
    std::array<int, 7> values{};
    std::vector<bool> used(static_cast<std::size_t>(max_value) + 1, false);

    // Order filter before replaying traces, computed by sorting rather than by any
    // closed-form shortcut: the truthful top four must be {c,d,e,g} with c smallest,
    // and dropping e must leave {c,d,f,g} on top.
    constexpr std::size_t ia = 0, ib = 1, ic = 2, id_ = 3, ie_ = 4, if_ = 5, ig = 6;
    auto top_four_letters = [&](const std::vector<std::size_t>& pool) {
        std::vector<std::size_t> ranked = pool;
        std::sort(ranked.begin(), ranked.end(), [&](std::size_t x, std::size_t y) {
            return values[x] != values[y] ? values[x] > values[y] : x < y;
        });
        ranked.resize(4);
        return std::set<std::size_t>(ranked.begin(), ranked.end());
    };
    auto feasible = [&]() {
        const auto truthful = top_four_letters({ia, ib, ic, id_, ie_, if_, ig});
        if (truthful != std::set<std::size_t>{ic, id_, ie_, ig}) return false;
        for (std::size_t other : truthful)
            if (values[ic] > values[other]) return false;
        return top_four_letters({ia, ib, ic, id_, if_, ig}) ==
               std::set<std::size_t>{ic, id_, if_, ig};
    };

    auto recurse = [&](auto&& self, std::size_t pos) -> void {
        if (pos == values.size()) {
            if (!feasible()) return;
            try {
                verify_gidm_narrative(make_gidm_scenario(values));
            } catch (const std::logic_error&) {
                return;
            }
            found.push_back(values);
            return;
        }
        for (int v = 1; v <= max_value; ++v) {
            if (used[static_cast<std::size_t>(v)]) continue;
            used[static_cast<std::size_t>(v)] = true;
            values[pos] = v;
            self(self, pos + 1);
            used[static_cast<std::size_t>(v)] = false;
        }
    };
    recurse(recurse, 0);
    return found;
}

}  // namespace netauct
