#include <doctest.h>

#include "netauct/model.hpp"
#include "netauct/verifier.hpp"
#include "support/builders.hpp"

using namespace netauct;
using testing::make_chain;
using testing::make_two_branch;

TEST_CASE("two-branch network: reachability and aligned order are frozen") {
    const AuctionInstance instance = make_two_branch();
    CHECK(informed_set(instance) == std::set<BuyerId>{1, 2, 3, 4, 5, 6});

    const AlignedPath apg = build_apg(instance);
    CHECK(apg.order == std::vector<BuyerId>{1, 6, 3, 5, 2, 4});
    CHECK(apg.position.at(1) == 1);
    CHECK(apg.position.at(6) == 2);
    CHECK(apg.position.at(3) == 3);
    CHECK(apg.position.at(5) == 4);
    CHECK(apg.position.at(2) == 5);
    CHECK(apg.position.at(4) == 6);
    CHECK(apg.bfs_distance.at(1) == 1);
    CHECK(apg.bfs_distance.at(6) == 1);
    CHECK(apg.bfs_distance.at(3) == 2);
    CHECK(apg.bfs_distance.at(5) == 2);
    CHECK(apg.bfs_distance.at(2) == 3);
    CHECK(apg.bfs_distance.at(4) == 3);
}

TEST_CASE("cutting an edge removes exactly the subtree behind it") {
    AuctionInstance instance = make_two_branch();
    instance.buyers.at(1).neighbors.clear();  // 3 and 2 now unreachable
    CHECK(informed_set(instance) == std::set<BuyerId>{1, 4, 5, 6});
    CHECK(build_apg(instance).order == std::vector<BuyerId>{1, 6, 5, 4});
}

TEST_CASE("equal distances break ties by smaller id") {
    AuctionInstance instance;
    instance.n = 3;
    instance.seller_neighbors = {1, 2, 3};
    for (int b = 1; b <= 3; ++b) instance.buyers[b] = BuyerType{{Rat(b)}, {}};
    validate_instance(instance);
    CHECK(build_apg(instance).order == std::vector<BuyerId>{1, 2, 3});
}

TEST_CASE("a buyer the seller cannot reach is not informed, even with in-edges") {
    AuctionInstance instance;
    instance.n = 2;
    instance.seller_neighbors = {1};
    instance.buyers[1] = BuyerType{{Rat(5)}, {}};
    instance.buyers[2] = BuyerType{{Rat(9)}, {1}};  // points back in, gets nothing out
    validate_instance(instance);
    CHECK(informed_set(instance) == std::set<BuyerId>{1});
}

TEST_CASE("close/far split partitions the order around the pivot") {
    const AuctionInstance instance = make_two_branch();
    const AlignedPath apg = build_apg(instance);

    const auto [close3, far3] = close_far_split(apg, 3);
    CHECK(close3 == std::set<BuyerId>{1, 6});
    CHECK(far3 == std::set<BuyerId>{5, 2, 4});

    const auto [close1, far1] = close_far_split(apg, 1);
    CHECK(close1.empty());
    CHECK(far1 == std::set<BuyerId>{6, 3, 5, 2, 4});

    const auto [close4, far4] = close_far_split(apg, 4);
    CHECK(close4 == std::set<BuyerId>{1, 6, 3, 5, 2});
    CHECK(far4.empty());
}

TEST_CASE("close/far split rejects buyers outside the order") {
    AuctionInstance instance = make_two_branch();
    instance.buyers.at(1).neighbors.clear();
    const AlignedPath apg = build_apg(instance);
    CHECK_THROWS_AS(close_far_split(apg, 3), precondition_error);
}

TEST_CASE("validation rejects malformed instances with specific complaints") {
    AuctionInstance good = make_two_branch();

    AuctionInstance gapped = good;
    gapped.buyers.erase(4);
    CHECK_THROWS_AS(validate_instance(gapped), input_error);

    AuctionInstance self_edge = good;
    self_edge.buyers.at(3).neighbors.insert(3);
    CHECK_THROWS_AS(validate_instance(self_edge), input_error);

    AuctionInstance out_of_range = good;
    out_of_range.seller_neighbors.insert(7);
    CHECK_THROWS_AS(validate_instance(out_of_range), input_error);

    AuctionInstance increasing = good;
    increasing.buyers.at(2).valuations = {Rat(1), Rat(2)};
    CHECK_THROWS_AS(validate_instance(increasing), input_error);

    AuctionInstance negative = good;
    negative.buyers.at(2).valuations = {Rat(-1)};
    CHECK_THROWS_AS(validate_instance(negative), input_error);

    AuctionInstance over_cap = good;
    over_cap.value_cap = Rat(5);
    CHECK_THROWS_AS(validate_instance(over_cap), input_error);

    AuctionInstance widened = good;  // declares a link the true profile lacks
    widened.buyers.at(2).neighbors.insert(4);
    CHECK_THROWS_AS(validate_instance(widened), input_error);

    AuctionInstance bad_k = good;
    bad_k.k = 0;
    CHECK_THROWS_AS(validate_instance(bad_k), input_error);
}

TEST_CASE("declared marginals read as zero past the stored vector") {
    const AuctionInstance instance =
        make_chain(std::vector<std::vector<Rat>>{{Rat(5), Rat(3)}}, 4);
    CHECK(instance.declared_value(1, 1) == Rat(5));
    CHECK(instance.declared_value(1, 2) == Rat(3));
    CHECK(instance.declared_value(1, 3) == Rat(0));
    CHECK(instance.declared_value(1, 7) == Rat(0));
}

TEST_CASE("outcome accessors default to zero and sum into revenue") {
    Outcome outcome;
    outcome.allocation[2] = 1;
    outcome.net_payment[2] = Rat(8);
    outcome.net_payment[1] = Rat(-5);
    CHECK(outcome.items(2) == 1);
    CHECK(outcome.items(9) == 0);
    CHECK(outcome.payment(1) == Rat(-5));
    CHECK(outcome.payment(9) == Rat(0));
    CHECK(outcome.revenue() == Rat(3));
}

TEST_CASE("generated instances keep order and distances mutually consistent") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        GenParams params;
        params.n = 7;
        params.seed = seed;
        params.topology = seed % 2 == 0 ? GenParams::Topology::random_tree
                                        : GenParams::Topology::random_graph;
        const AuctionInstance instance = gen_instance(params);
        const std::set<BuyerId> informed = informed_set(instance);
        const AlignedPath apg = build_apg(instance);

        CHECK(apg.order.size() == informed.size());
        int previous_distance = 0;
        for (std::size_t j = 0; j < apg.order.size(); ++j) {
            const BuyerId b = apg.order[j];
            CHECK(informed.count(b) == 1);
            CHECK(apg.position.at(b) == static_cast<int>(j) + 1);
            CHECK(apg.bfs_distance.at(b) >= previous_distance);
            previous_distance = apg.bfs_distance.at(b);
        }

        // Disclosing less can only shrink the reachable set.
        AuctionInstance cut = instance;
        for (auto& [id, type] : cut.buyers) {
            if (!type.neighbors.empty()) {
                type.neighbors.erase(type.neighbors.begin());
                break;
            }
        }
        for (BuyerId b : informed_set(cut)) CHECK(informed.count(b) == 1);
    }
}
