#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fmkt/matching.hpp"

using namespace fmkt;

namespace {

WeightedBipartiteGraph random_graph(std::mt19937_64& rng, std::size_t max_side) {
    std::uniform_int_distribution<std::size_t> side(0, max_side);
    // small integers keep the oracle comparison exact
    std::uniform_int_distribution<int> w(0, 9);
    WeightedBipartiteGraph g(side(rng), side(rng));
    for (double& x : g.weights) x = static_cast<double>(w(rng));
    return g;
}

void check_valid(const WeightedBipartiteGraph& g, const Matching& m) {
    std::vector<int> buyer_deg(g.num_buyers, 0), seller_deg(g.num_sellers, 0);
    double total = 0.0;
    for (const MatchEdge& e : m.pairs) {
        REQUIRE(e.buyer < g.num_buyers);
        REQUIRE(e.seller < g.num_sellers);
        ++buyer_deg[e.buyer];
        ++seller_deg[e.seller];
        CHECK(g.weight(e.buyer, e.seller) > 0.0);
        total += g.weight(e.buyer, e.seller);
    }
    for (const int d : buyer_deg) CHECK(d <= 1);
    for (const int d : seller_deg) CHECK(d <= 1);
    CHECK(m.total_weight == doctest::Approx(total).epsilon(1e-12));
}

}  // namespace

TEST_CASE("degenerate graphs") {
    CHECK(max_weight_matching(WeightedBipartiteGraph()).pairs.empty());
    CHECK(max_weight_matching(WeightedBipartiteGraph(3, 0)).pairs.empty());

    WeightedBipartiteGraph g(1, 1);
    g.set_weight(0, 0, 2.5);
    const Matching m = max_weight_matching(g);
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.pairs[0] == MatchEdge{0, 0});
    CHECK(m.total_weight == 2.5);
    CHECK(m.seller_of(0) == 0);
    CHECK(m.buyer_of(0) == 0);

    g.set_weight(0, 0, 0.0);
    CHECK(max_weight_matching(g).pairs.empty());
}

TEST_CASE("dominant edge wins over two mediocre ones") {
    // pairing (0,0)+(1,1) = 5, but the single edge (0,1) = 6 dominates
    WeightedBipartiteGraph g(2, 2);
    g.set_weight(0, 0, 2.0);
    g.set_weight(1, 1, 3.0);
    g.set_weight(0, 1, 6.0);
    const Matching m = max_weight_matching(g);
    CHECK(m.total_weight == doctest::Approx(6.0));
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.pairs[0] == MatchEdge{0, 1});
    CHECK(m.seller_of(1) == Matching::npos);
    CHECK(brute_force_matching(g).total_weight == doctest::Approx(6.0));
}

TEST_CASE("invalid weights are rejected") {
    WeightedBipartiteGraph g(2, 2);
    g.set_weight(0, 0, -1.0);
    CHECK_THROWS_AS(max_weight_matching(g), std::domain_error);
    g.set_weight(0, 0, std::numeric_limits<double>::quiet_NaN());
    CHECK_THROWS_AS(max_weight_matching(g), std::domain_error);
    g.set_weight(0, 0, std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(max_weight_matching(g), std::domain_error);
}

TEST_CASE("oracle guard on large graphs") {
    CHECK_THROWS_AS(brute_force_matching(WeightedBipartiteGraph(9, 12)), std::length_error);
    CHECK_NOTHROW(brute_force_matching(WeightedBipartiteGraph(3, 12)));
}

TEST_CASE("matches the exhaustive oracle on random graphs") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
        const WeightedBipartiteGraph g = random_graph(rng, 7);
        const Matching fast = max_weight_matching(g);
        const Matching exact = brute_force_matching(g);
        check_valid(g, fast);
        check_valid(g, exact);
        // integer weights, so equality is exact
        CHECK(fast.total_weight == exact.total_weight);
    }
}

TEST_CASE("adding an edge never lowers the optimum") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> w(0.0, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        WeightedBipartiteGraph g = random_graph(rng, 6);
        if (g.num_buyers == 0 || g.num_sellers == 0) continue;
        const double before = max_weight_matching(g).total_weight;
        std::uniform_int_distribution<std::size_t> bi(0, g.num_buyers - 1);
        std::uniform_int_distribution<std::size_t> si(0, g.num_sellers - 1);
        const std::size_t b = bi(rng), s = si(rng);
        g.set_weight(b, s, g.weight(b, s) + w(rng));
        CHECK(max_weight_matching(g).total_weight >= before - 1e-12);
    }
}
