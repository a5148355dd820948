#include "fmkt/double_auction.hpp"

#include <algorithm>
#include <stdexcept>

namespace fmkt {

namespace {

void require_valid(const DoubleInstance& inst) {
    if (inst.slots_per_round < 1)
        throw std::invalid_argument("DoubleInstance: T must be >= 1");
    for (std::size_t j = 0; j < inst.num_sellers(); ++j) {
        if (inst.seller_cap(j) > inst.slots_per_round)
            throw std::invalid_argument("DoubleInstance: N_j exceeds T for seller " +
                                        std::to_string(j));
        const BidValidation v = validate_bid(inst.seller_asks[j], /*require_convex=*/false);
        if (!v.ok())
            throw std::invalid_argument("DoubleInstance: seller " + std::to_string(j) + ": " +
                                        v.message());
    }
    for (std::size_t i = 0; i < inst.num_buyers(); ++i) {
        if (inst.buyer_bids[i].size() != inst.num_sellers())
            throw std::invalid_argument("DoubleInstance: buyer " + std::to_string(i) +
                                        " bid vector count mismatch");
        for (std::size_t j = 0; j < inst.num_sellers(); ++j) {
            const BidValidation v = validate_bid(inst.buyer_bids[i][j], /*require_convex=*/false);
            if (!v.ok())
                throw std::invalid_argument("DoubleInstance: buyer " + std::to_string(i) +
                                            " toward seller " + std::to_string(j) + ": " +
                                            v.message());
        }
    }
}

struct EdgeTable {
    std::vector<EdgeChoice> edges;  // row-major [buyer][seller]
    std::size_t num_sellers = 0;
    const EdgeChoice& at(std::size_t b, std::size_t s) const {
        return edges[b * num_sellers + s];
    }
};

EdgeTable build_edges(const DoubleInstance& inst) {
    EdgeTable t;
    t.num_sellers = inst.num_sellers();
    t.edges.resize(inst.num_buyers() * inst.num_sellers());
    for (std::size_t b = 0; b < inst.num_buyers(); ++b)
        for (std::size_t s = 0; s < inst.num_sellers(); ++s)
            t.edges[b * t.num_sellers + s] = edge_weight(inst, b, s);
    return t;
}

WeightedBipartiteGraph to_graph(const EdgeTable& t, std::size_t buyers, std::size_t sellers) {
    WeightedBipartiteGraph g(buyers, sellers);
    for (std::size_t b = 0; b < buyers; ++b)
        for (std::size_t s = 0; s < sellers; ++s)
            g.set_weight(b, s, t.at(b, s).weight);
    return g;
}

DoubleAllocation allocation_from_matching(const EdgeTable& t, Matching m) {
    DoubleAllocation alloc;
    alloc.efficiency = m.total_weight;
    alloc.pair_slots.reserve(m.pairs.size());
    for (const MatchEdge& e : m.pairs) alloc.pair_slots.push_back(t.at(e.buyer, e.seller).slots);
    alloc.matching = std::move(m);
    return alloc;
}

// Matching weight with one row (buyer) or column (seller) dropped; edge
// weights are unaffected by removing an unrelated agent, so the table is
// reused across counterfactuals.
double efficiency_without(const EdgeTable& t, std::size_t buyers, std::size_t sellers,
                          std::ptrdiff_t drop_buyer, std::ptrdiff_t drop_seller) {
    WeightedBipartiteGraph g(buyers - (drop_buyer >= 0), sellers - (drop_seller >= 0));
    std::size_t row = 0;
    for (std::size_t b = 0; b < buyers; ++b) {
        if (static_cast<std::ptrdiff_t>(b) == drop_buyer) continue;
        std::size_t col = 0;
        for (std::size_t s = 0; s < sellers; ++s) {
            if (static_cast<std::ptrdiff_t>(s) == drop_seller) continue;
            g.set_weight(row, col, t.at(b, s).weight);
            ++col;
        }
        ++row;
    }
    return max_weight_matching(g).total_weight;
}

struct DoubleBruteState {
    const DoubleInstance* inst = nullptr;
    std::vector<char> seller_used;
    std::vector<MatchEdge> current_pairs;
    std::vector<int> current_slots;
    std::vector<MatchEdge> best_pairs;
    std::vector<int> best_slots;
    double best_eff = 0.0;
};

void double_brute_recurse(DoubleBruteState& st, std::size_t buyer, double eff) {
    constexpr double kTol = 1e-12;
    if (buyer == st.inst->num_buyers()) {
        const bool better = eff > st.best_eff + kTol;
        const bool tie = !better && eff > st.best_eff - kTol &&
                         st.current_pairs.size() < st.best_pairs.size();
        if (better || tie) {
            st.best_pairs = st.current_pairs;
            st.best_slots = st.current_slots;
            st.best_eff = std::max(st.best_eff, eff);
        }
        return;
    }
    double_brute_recurse(st, buyer + 1, eff);
    for (std::size_t s = 0; s < st.inst->num_sellers(); ++s) {
        if (st.seller_used[s]) continue;
        // independent per-pair scan over the slot count
        const BidVector& b = st.inst->buyer_bids[buyer][s];
        const BidVector& a = st.inst->seller_asks[s];
        const int nmax = std::min(b.max_slots(), a.max_slots());
        double surplus = 0.0;
        int slots = 0;
        for (int n = 1; n <= nmax; ++n) {
            const double gain = b.at(n) - a.at(n);
            if (gain > surplus) {
                surplus = gain;
                slots = n;
            }
        }
        if (slots == 0) continue;
        st.seller_used[s] = 1;
        st.current_pairs.push_back({buyer, s});
        st.current_slots.push_back(slots);
        double_brute_recurse(st, buyer + 1, eff + surplus);
        st.current_slots.pop_back();
        st.current_pairs.pop_back();
        st.seller_used[s] = 0;
    }
}

}  // namespace

EdgeChoice edge_weight(const DoubleInstance& inst, std::size_t buyer, std::size_t seller) {
    const BidVector& b = inst.buyer_bids.at(buyer).at(seller);
    const BidVector& a = inst.seller_asks.at(seller);
    const int nmax = std::min(b.max_slots(), a.max_slots());
    EdgeChoice best;  // n = 0 gives surplus 0
    for (int n = 1; n <= nmax; ++n) {
        const double surplus = b.at(n) - a.at(n);
        if (surplus > best.weight) {
            best.weight = surplus;
            best.slots = n;
        }
    }
    return best;
}

DoubleAllocation double_wd(const DoubleInstance& inst) {
    require_valid(inst);
    const EdgeTable t = build_edges(inst);
    Matching m = max_weight_matching(to_graph(t, inst.num_buyers(), inst.num_sellers()));
    return allocation_from_matching(t, std::move(m));
}

DoubleAllocation exhaustive_double_wd(const DoubleInstance& inst) {
    require_valid(inst);
    if (inst.num_buyers() > 5 || inst.num_sellers() > 5)
        throw std::length_error("exhaustive_double_wd: too many agents");
    for (std::size_t j = 0; j < inst.num_sellers(); ++j)
        if (inst.seller_cap(j) > 6)
            throw std::length_error("exhaustive_double_wd: seller cap too large");
    DoubleBruteState st;
    st.inst = &inst;
    st.seller_used.assign(inst.num_sellers(), 0);
    double_brute_recurse(st, 0, 0.0);
    DoubleAllocation alloc;
    alloc.matching.pairs = std::move(st.best_pairs);
    alloc.pair_slots = std::move(st.best_slots);
    for (std::size_t k = 0; k < alloc.matching.pairs.size(); ++k) {
        const MatchEdge& e = alloc.matching.pairs[k];
        alloc.efficiency += inst.buyer_bids[e.buyer][e.seller].at(alloc.pair_slots[k]) -
                            inst.seller_asks[e.seller].at(alloc.pair_slots[k]);
    }
    alloc.matching.total_weight = alloc.efficiency;
    return alloc;
}

DoubleSettlement vcg_double_pricing(const DoubleInstance& inst, const DoubleAllocation& alloc,
                                    const std::vector<std::vector<BidVector>>& true_buyer_values,
                                    const std::vector<BidVector>& true_seller_values) {
    require_valid(inst);
    if (true_buyer_values.size() != inst.num_buyers() ||
        true_seller_values.size() != inst.num_sellers())
        throw std::invalid_argument("vcg_double_pricing: true value schedule size mismatch");
    for (std::size_t k = 0; k < alloc.matching.pairs.size(); ++k) {
        const MatchEdge& e = alloc.matching.pairs[k];
        if (e.buyer >= inst.num_buyers() || e.seller >= inst.num_sellers() ||
            alloc.pair_slots.size() != alloc.matching.pairs.size() ||
            alloc.pair_slots[k] > inst.seller_cap(e.seller))
            throw std::invalid_argument("vcg_double_pricing: allocation does not match instance");
    }

    const EdgeTable t = build_edges(inst);
    DoubleSettlement s;
    s.buyer_payments.assign(inst.num_buyers(), 0.0);
    s.seller_receipts.assign(inst.num_sellers(), 0.0);
    s.buyer_utilities.assign(inst.num_buyers(), 0.0);
    s.seller_utilities.assign(inst.num_sellers(), 0.0);

    for (std::size_t k = 0; k < alloc.matching.pairs.size(); ++k) {
        const MatchEdge& e = alloc.matching.pairs[k];
        const int n = alloc.pair_slots[k];
        const double q_no_buyer =
            efficiency_without(t, inst.num_buyers(), inst.num_sellers(),
                               static_cast<std::ptrdiff_t>(e.buyer), -1);
        const double q_no_seller =
            efficiency_without(t, inst.num_buyers(), inst.num_sellers(), -1,
                               static_cast<std::ptrdiff_t>(e.seller));
        s.buyer_payments[e.buyer] =
            inst.buyer_bids[e.buyer][e.seller].at(n) - (alloc.efficiency - q_no_buyer);
        s.seller_receipts[e.seller] =
            inst.seller_asks[e.seller].at(n) + (alloc.efficiency - q_no_seller);
        s.buyer_utilities[e.buyer] =
            true_buyer_values[e.buyer][e.seller].at(n) - s.buyer_payments[e.buyer];
        s.seller_utilities[e.seller] =
            s.seller_receipts[e.seller] - true_seller_values[e.seller].at(n);
    }
    for (const double p : s.buyer_payments) s.budget_balance += p;
    for (const double p : s.seller_receipts) s.budget_balance -= p;

    if (s.budget_balance < inst.reserve_price) {
        s = DoubleSettlement{};
        s.buyer_payments.assign(inst.num_buyers(), 0.0);
        s.seller_receipts.assign(inst.num_sellers(), 0.0);
        s.buyer_utilities.assign(inst.num_buyers(), 0.0);
        s.seller_utilities.assign(inst.num_sellers(), 0.0);
        s.terminated_by_reserve = true;
    }
    return s;
}

DoubleSettlement vcg_double_pricing(const DoubleInstance& inst, const DoubleAllocation& alloc) {
    return vcg_double_pricing(inst, alloc, inst.buyer_bids, inst.seller_asks);
}

double buyer_payment(const DoubleInstance& inst, const DoubleAllocation& alloc, std::size_t buyer) {
    const std::size_t seller = alloc.matching.seller_of(buyer);
    if (seller == Matching::npos)
        throw std::invalid_argument("buyer_payment: buyer is not matched");
    int n = 0;
    for (std::size_t k = 0; k < alloc.matching.pairs.size(); ++k)
        if (alloc.matching.pairs[k].buyer == buyer) n = alloc.pair_slots[k];
    const EdgeTable t = build_edges(inst);
    const double q_without = efficiency_without(t, inst.num_buyers(), inst.num_sellers(),
                                                static_cast<std::ptrdiff_t>(buyer), -1);
    return inst.buyer_bids[buyer][seller].at(n) - (alloc.efficiency - q_without);
}

double seller_receipt(const DoubleInstance& inst, const DoubleAllocation& alloc,
                      std::size_t seller) {
    const std::size_t buyer = alloc.matching.buyer_of(seller);
    if (buyer == Matching::npos)
        throw std::invalid_argument("seller_receipt: seller is not matched");
    int n = 0;
    for (std::size_t k = 0; k < alloc.matching.pairs.size(); ++k)
        if (alloc.matching.pairs[k].seller == seller) n = alloc.pair_slots[k];
    const EdgeTable t = build_edges(inst);
    const double q_without = efficiency_without(t, inst.num_buyers(), inst.num_sellers(), -1,
                                                static_cast<std::ptrdiff_t>(seller));
    return inst.seller_asks[seller].at(n) + (alloc.efficiency - q_without);
}

}  // namespace fmkt
