#pragma once

#include <cstddef>
#include <vector>

#include "fmkt/bids.hpp"
#include "fmkt/sigmoid.hpp"

namespace fmkt {

// SingleMUE reverse auction: one buyer (the MUE), one seller per femtocell.
struct ReverseInstance {
    std::vector<BidVector> bids;  // one per femtocell, convex, anchored
    std::vector<double> rates;    // full-frame rate R_i toward the MUE, Mb/s
    int slots_per_round = 100;    // T
    double macro_rate = 0.0;      // R_mac fallback, Mb/s
    SigmoidUtility mue_utility;

    std::size_t num_femtos() const { return bids.size(); }
};

struct ReverseAllocation {
    std::vector<int> slots;   // n*_i per femtocell
    double efficiency = 0.0;  // Q*; 0 when the macro fallback voids the trade

    int total_slots() const;
};

struct ReverseSettlement {
    std::vector<double> payments;   // p_i, 0 for losers
    std::vector<double> utilities;  // u_i = p_i - v_i(n*_i), 0 for losers
    double mue_total_payment = 0.0;
    double mue_net_utility = 0.0;   // achieved utility minus total payments
};

struct InstanceDefect {
    std::size_t femto = 0;
    BidValidation bid;
    bool ok() const { return bid.ok(); }
};

// Structural validation of every bid vector plus instance-level bounds
// (rates >= 0, N_i <= T). Returns the first defect found.
InstanceDefect validate_bids(const ReverseInstance& inst);

struct GreedyStats {
    int iterations = 0;         // slots granted
    long long evaluations = 0;  // marginal-gain evaluations
};

// Greedy winner determination. Grants one slot at a time to the femtocell
// with the largest strictly positive marginal net gain; ties go to the
// lowest index. Exact for convex bids and concave MUE utility; rejects
// non-convex bids. Applies the macro fallback: if the achieved utility is
// below U(R_mac), the whole allocation is voided.
ReverseAllocation greedy_wd(const ReverseInstance& inst, GreedyStats* stats = nullptr);

// Exact oracle: full enumeration of all feasible allocations. Requires
// prod(N_i + 1) <= 10^7; ties broken toward the lexicographically smallest
// allocation.
ReverseAllocation exhaustive_wd(const ReverseInstance& inst);

// VCG payment for femtocell i: b_i(n*_i) + (Q* - Q*_{-b_i}); 0 for losers.
double vcg_price(const ReverseInstance& inst, const ReverseAllocation& alloc, std::size_t i);

// Full settlement against the sellers' true value schedules.
ReverseSettlement settle_reverse(const ReverseInstance& inst, const ReverseAllocation& alloc,
                                 const std::vector<BidVector>& true_values);

}  // namespace fmkt
