#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "fmkt/bids.hpp"
#include "fmkt/matching.hpp"

namespace fmkt {

// MultiMUE double auction: MUEs are buyers, femtocells are sellers, trades
// are one-to-one. The seller ask vector for femtocell j runs to its cap
// N_j; buyer bid vectors may span up to T entries, entries above N_j are
// accepted and ignored.
struct DoubleInstance {
    std::vector<std::vector<BidVector>> buyer_bids;  // [buyer][seller]
    std::vector<BidVector> seller_asks;              // [seller], length N_j + 1
    int slots_per_round = 100;                       // T
    double reserve_price = -std::numeric_limits<double>::infinity();  // P_res

    std::size_t num_buyers() const { return buyer_bids.size(); }
    std::size_t num_sellers() const { return seller_asks.size(); }
    int seller_cap(std::size_t j) const { return seller_asks[j].max_slots(); }
};

struct EdgeChoice {
    double weight = 0.0;  // w_ij >= 0
    int slots = 0;        // maximizing n*_ij, smallest on ties
};

// w_ij = max_{n <= N_j} (b_ij(n) - a_j(n)); n = 0 always yields 0, so the
// weight is never negative.
EdgeChoice edge_weight(const DoubleInstance& inst, std::size_t buyer, std::size_t seller);

struct DoubleAllocation {
    Matching matching;
    std::vector<int> pair_slots;  // n*_ij parallel to matching.pairs
    double efficiency = 0.0;      // Q* = total matched surplus, >= 0
};

// Winner determination: edge-weight graph + maximum-weight matching.
DoubleAllocation double_wd(const DoubleInstance& inst);

// Exact oracle: enumerate every one-to-one matching and every per-pair
// slot choice. Requires |I|, |J| <= 5 and N_j <= 6.
DoubleAllocation exhaustive_double_wd(const DoubleInstance& inst);

struct DoubleSettlement {
    std::vector<double> buyer_payments;   // p^b_i, 0 for losers
    std::vector<double> seller_receipts;  // p^s_j, 0 for losers
    std::vector<double> buyer_utilities;
    std::vector<double> seller_utilities;
    double budget_balance = 0.0;  // sum p^b - sum p^s; negative = deficit
    bool terminated_by_reserve = false;
};

// VCG pricing for both sides. Counterfactual markets remove the whole
// agent (all of an MUE's bid vectors, or a femtocell's ask). When the
// auctioneer profit falls below the reserve price, every trade is voided.
// Utilities are computed against the supplied true value schedules.
DoubleSettlement vcg_double_pricing(const DoubleInstance& inst, const DoubleAllocation& alloc,
                                    const std::vector<std::vector<BidVector>>& true_buyer_values,
                                    const std::vector<BidVector>& true_seller_values);

// Convenience overload for truthful instances (reported = true values).
DoubleSettlement vcg_double_pricing(const DoubleInstance& inst, const DoubleAllocation& alloc);

// Targeted VCG payments; cheaper than a full settlement when only one
// agent's outcome matters. The agent must be matched in alloc.
double buyer_payment(const DoubleInstance& inst, const DoubleAllocation& alloc, std::size_t buyer);
double seller_receipt(const DoubleInstance& inst, const DoubleAllocation& alloc, std::size_t seller);

}  // namespace fmkt
