#pragma once

#include <cstddef>
#include <vector>

#include "fmkt/bids.hpp"
#include "fmkt/sigmoid.hpp"

namespace fmkt {

// Seller-side private value model. A femtocell's value for leasing n of its
// T slots is the total utility its registered FUEs lose when their share of
// the frame shrinks to the (T - n)/T fraction. The FUEs time-share the frame
// equally, so FUE k's baseline rate is fue_rates[k] / num_fues.
//
// The resulting schedule v(n) has v(0) = 0, is nondecreasing, and is convex
// whenever every FUE utility is concave.
struct FemtoValuationModel {
    std::vector<SigmoidUtility> fue_utilities;
    std::vector<double> fue_rates;  // full-frame rate per FUE, Mb/s
    int slots_per_round = 100;      // T

    // v(n); throws std::domain_error when n is outside [0, T].
    double value(int n) const;

    // Truthful bid/ask vector {(0,0), (1,v(1)), ..., (N,v(N))}.
    BidVector truthful_bid(int max_slots) const;
};

// Buyer-side private value model for an MUE. link_rates[j] is the full-frame
// data rate toward femtocell j, so one slot of femtocell j is worth
// link_rates[j] / T of rate. macro_rate is the fallback rate through the
// macro BS.
struct MueValuationModel {
    SigmoidUtility utility;
    double macro_rate = 0.0;
    std::vector<double> link_rates;  // full-frame rate per femtocell, Mb/s
    int slots_per_round = 100;

    // Net gain of an aggregate slot allocation across all femtocells:
    // U(sum_i n_i R_i / T) - U(R_mac). May be negative.
    double value_single(const std::vector<int>& slots) const;

    // Net gain of buying k slots from femtocell j alone. Buying nothing
    // means staying on the macro BS, so value_pair(j, 0) == 0.
    double value_pair(std::size_t j, int k) const;

    // Truthful bid vector toward femtocell j. Entries where leaving the
    // macro BS would be a net loss are clamped to 0; the mechanism never
    // selects them, so the clamp does not change any auction outcome.
    BidVector truthful_bid(std::size_t j, int max_slots) const;
};

}  // namespace fmkt
