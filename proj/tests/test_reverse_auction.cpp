#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "fmkt/reverse_auction.hpp"

using namespace fmkt;

namespace {

BidVector linear_bid(int n, double c) {
    BidVector b;
    for (int k = 0; k <= n; ++k) b.values.push_back(c * k);
    return b;
}

// Random convex bid vector: cumulative sum of sorted nonnegative increments.
BidVector random_convex_bid(std::mt19937_64& rng, int max_slots, double scale) {
    std::uniform_real_distribution<double> inc(0.0, scale);
    std::vector<double> increments(static_cast<std::size_t>(max_slots));
    for (double& d : increments) d = inc(rng);
    std::sort(increments.begin(), increments.end());
    BidVector b;
    b.values.push_back(0.0);
    for (const double d : increments) b.values.push_back(b.values.back() + d);
    return b;
}

ReverseInstance random_instance(std::mt19937_64& rng, int max_femtos, int max_cap, int max_T) {
    std::uniform_int_distribution<int> num(0, max_femtos);
    std::uniform_int_distribution<int> t_dist(1, max_T);
    ReverseInstance inst;
    inst.slots_per_round = t_dist(rng);
    std::uniform_int_distribution<int> cap(0, std::min(max_cap, inst.slots_per_round));
    std::uniform_real_distribution<double> rate(0.0, 12.0);
    std::uniform_real_distribution<double> mac(0.0, 0.3);
    std::uniform_real_distribution<double> dem(1.0, 8.0);
    inst.mue_utility = SigmoidUtility(1.0, dem(rng));
    inst.macro_rate = mac(rng);
    const int I = num(rng);
    for (int i = 0; i < I; ++i) {
        inst.bids.push_back(random_convex_bid(rng, cap(rng), 0.08));
        inst.rates.push_back(rate(rng));
    }
    return inst;
}

void check_feasible(const ReverseInstance& inst, const ReverseAllocation& alloc) {
    REQUIRE(alloc.slots.size() == inst.num_femtos());
    CHECK(alloc.total_slots() <= inst.slots_per_round);
    for (std::size_t i = 0; i < inst.num_femtos(); ++i) {
        CHECK(alloc.slots[i] >= 0);
        CHECK(alloc.slots[i] <= inst.bids[i].max_slots());
    }
}

}  // namespace

TEST_CASE("bid validation examples") {
    CHECK(validate_bid(BidVector({0, 2, 5}), true).ok());

    const BidValidation anchored = validate_bid(BidVector({0, 1}), true);
    CHECK(anchored.ok());
    const BidValidation bad_anchor = validate_bid(BidVector({1, 2}), true);
    CHECK(bad_anchor.defect == BidDefect::nonzero_anchor);

    const BidValidation non_convex = validate_bid(BidVector({0, 3, 4}), true);
    CHECK(non_convex.defect == BidDefect::non_convex);
    CHECK(non_convex.index == 2);
    CHECK(validate_bid(BidVector({0, 3, 4}), false).ok());

    const BidValidation decreasing = validate_bid(BidVector({0, 3, 2}), false);
    CHECK(decreasing.defect == BidDefect::decreasing);
    CHECK(decreasing.index == 2);
}

TEST_CASE("greedy handles empty and unprofitable markets") {
    ReverseInstance inst;
    inst.slots_per_round = 10;
    inst.macro_rate = 0.5;
    inst.mue_utility = SigmoidUtility(1.0, 4.0);

    const ReverseAllocation empty = greedy_wd(inst);
    CHECK(empty.efficiency == 0.0);
    CHECK(empty.slots.empty());

    // bids so high that value never exceeds cost
    inst.bids.push_back(linear_bid(5, 10.0));
    inst.rates.push_back(8.0);
    const ReverseAllocation alloc = greedy_wd(inst);
    CHECK(alloc.slots == std::vector<int>{0});
    CHECK(alloc.efficiency == 0.0);
}

TEST_CASE("greedy rejects non-convex bids") {
    ReverseInstance inst;
    inst.slots_per_round = 5;
    inst.mue_utility = SigmoidUtility(1.0, 4.0);
    inst.bids.push_back(BidVector({0, 3, 4}));
    inst.rates.push_back(5.0);
    CHECK_THROWS_AS(greedy_wd(inst), std::invalid_argument);
    CHECK_THROWS_AS(exhaustive_wd(inst), std::invalid_argument);
}

TEST_CASE("exhaustive buys everything when every slot is profitable") {
    ReverseInstance inst;
    inst.slots_per_round = 5;
    inst.macro_rate = 0.01;
    inst.mue_utility = SigmoidUtility(1.0, 1.0);
    inst.bids.push_back(linear_bid(3, 0.001));
    inst.rates.push_back(2.0);
    const ReverseAllocation alloc = exhaustive_wd(inst);
    CHECK(alloc.slots == std::vector<int>{3});
    CHECK(greedy_wd(inst).slots == std::vector<int>{3});
}

TEST_CASE("all-zero rates lease nothing") {
    ReverseInstance inst;
    inst.slots_per_round = 8;
    inst.macro_rate = 0.2;
    inst.mue_utility = SigmoidUtility(1.0, 4.0);
    inst.bids = {linear_bid(4, 0.01), linear_bid(4, 0.02)};
    inst.rates = {0.0, 0.0};
    const ReverseAllocation alloc = exhaustive_wd(inst);
    CHECK(alloc.slots == std::vector<int>{0, 0});
    CHECK(alloc.efficiency == 0.0);
}

TEST_CASE("exhaustive rejects oversized instances") {
    ReverseInstance inst;
    inst.slots_per_round = 100;
    inst.mue_utility = SigmoidUtility(1.0, 4.0);
    for (int i = 0; i < 5; ++i) {
        inst.bids.push_back(linear_bid(100, 0.001));
        inst.rates.push_back(1.0);
    }
    CHECK_THROWS_AS(exhaustive_wd(inst), std::length_error);
}

TEST_CASE("greedy matches the exhaustive oracle on random convex instances") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 1000; ++trial) {
        const ReverseInstance inst = random_instance(rng, 5, 5, 15);
        GreedyStats stats;
        const ReverseAllocation greedy = greedy_wd(inst, &stats);
        const ReverseAllocation exact = exhaustive_wd(inst);
        check_feasible(inst, greedy);
        check_feasible(inst, exact);
        CHECK(std::abs(greedy.efficiency - exact.efficiency) <= 1e-9);
        // complexity guard: at most T iterations of I evaluations each
        CHECK(stats.iterations <= inst.slots_per_round);
        CHECK(stats.evaluations <=
              static_cast<long long>(inst.slots_per_round) *
                  static_cast<long long>(std::max<std::size_t>(inst.num_femtos(), 1)));
    }
}

TEST_CASE("vcg price examples") {
    // single seller: Q*_{-b} = 0, so p = b(n*) + Q*
    {
        ReverseInstance inst;
        inst.slots_per_round = 4;
        inst.macro_rate = 0.01;
        inst.mue_utility = SigmoidUtility(1.0, 2.0);
        inst.bids = {linear_bid(4, 0.01)};
        inst.rates = {3.0};
        const ReverseAllocation alloc = greedy_wd(inst);
        REQUIRE(alloc.slots[0] > 0);
        const double p = vcg_price(inst, alloc, 0);
        CHECK(p == doctest::Approx(inst.bids[0].at(alloc.slots[0]) + alloc.efficiency)
                       .epsilon(1e-12));
    }
    // two identical sellers with linear bids and N_i = T: removing one
    // leaves the optimum unchanged, so each winner is paid its bid
    {
        ReverseInstance inst;
        inst.slots_per_round = 6;
        inst.macro_rate = 0.01;
        inst.mue_utility = SigmoidUtility(1.0, 2.0);
        inst.bids = {linear_bid(6, 0.005), linear_bid(6, 0.005)};
        inst.rates = {3.0, 3.0};
        const ReverseAllocation alloc = greedy_wd(inst);
        CHECK(alloc.total_slots() > 0);
        for (std::size_t i = 0; i < 2; ++i) {
            const double p = vcg_price(inst, alloc, i);
            if (alloc.slots[i] == 0) {
                CHECK(p == 0.0);
            } else {
                CHECK(p == doctest::Approx(inst.bids[i].at(alloc.slots[i])).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("vcg price rejects unknown ids") {
    ReverseInstance inst;
    inst.slots_per_round = 3;
    inst.mue_utility = SigmoidUtility(1.0, 2.0);
    inst.bids = {linear_bid(2, 0.01)};
    inst.rates = {1.0};
    const ReverseAllocation alloc = greedy_wd(inst);
    CHECK_THROWS_AS(vcg_price(inst, alloc, 5), std::out_of_range);
}

TEST_CASE("settlement identities on random truthful instances") {
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 200; ++trial) {
        const ReverseInstance inst = random_instance(rng, 4, 4, 12);
        const ReverseAllocation alloc = greedy_wd(inst);
        const ReverseSettlement s = settle_reverse(inst, alloc, inst.bids);
        double total = 0.0;
        for (std::size_t i = 0; i < inst.num_femtos(); ++i) {
            if (alloc.slots[i] == 0) {
                CHECK(s.payments[i] == 0.0);
                CHECK(s.utilities[i] == 0.0);
            } else {
                // u_i + v_i(n*_i) = p_i exactly
                CHECK(s.utilities[i] + inst.bids[i].at(alloc.slots[i]) ==
                      doctest::Approx(s.payments[i]).epsilon(1e-12));
                // individual rationality under truthful bids
                CHECK(s.utilities[i] >= -1e-9);
            }
            total += s.payments[i];
        }
        CHECK(s.mue_total_payment == doctest::Approx(total).epsilon(1e-12));
    }
}

TEST_CASE("truthful bidding is weakly dominant") {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<double> factors = {0.5, 0.8, 1.5, 2.0};
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        ReverseInstance inst = random_instance(rng, 4, 4, 12);
        if (inst.num_femtos() == 0 || inst.bids[0].max_slots() == 0) continue;
        ++checked;
        const BidVector true_value = inst.bids[0];
        const ReverseAllocation alloc = greedy_wd(inst);
        const double u_truth =
            alloc.slots[0] > 0
                ? vcg_price(inst, alloc, 0) - true_value.at(alloc.slots[0])
                : 0.0;

        auto manipulated_utility = [&](const BidVector& fake) {
            ReverseInstance cheat = inst;
            cheat.bids[0] = fake;
            const ReverseAllocation a = greedy_wd(cheat);
            if (a.slots[0] == 0) return 0.0;
            return vcg_price(cheat, a, 0) - true_value.at(a.slots[0]);
        };

        for (const double f : factors)
            CHECK(u_truth - manipulated_utility(true_value.scaled(f)) >= -1e-9);

        // random convexity-preserving perturbations: rescale the increment
        // sequence and re-sort it
        for (int p = 0; p < 10; ++p) {
            std::vector<double> inc;
            for (std::size_t n = 1; n < true_value.values.size(); ++n)
                inc.push_back((true_value.values[n] - true_value.values[n - 1]) *
                              (0.25 + 1.75 * unit(rng)));
            std::sort(inc.begin(), inc.end());
            BidVector fake;
            fake.values.push_back(0.0);
            for (const double d : inc) fake.values.push_back(fake.values.back() + d);
            CHECK(u_truth - manipulated_utility(fake) >= -1e-9);
        }
    }
    CHECK(checked >= 300);
}
