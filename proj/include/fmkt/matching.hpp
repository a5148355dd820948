#pragma once

#include <cstddef>
#include <vector>

namespace fmkt {

// Dense bipartite graph between buyers (MUEs) and sellers (femtocells).
// All weights must be finite and >= 0; a zero weight means no profitable
// trade and is equivalent to an absent edge.
struct WeightedBipartiteGraph {
    std::size_t num_buyers = 0;
    std::size_t num_sellers = 0;
    std::vector<double> weights;  // row-major [buyer * num_sellers + seller]

    WeightedBipartiteGraph() = default;
    WeightedBipartiteGraph(std::size_t buyers, std::size_t sellers)
        : num_buyers(buyers), num_sellers(sellers), weights(buyers * sellers, 0.0) {}

    double weight(std::size_t buyer, std::size_t seller) const {
        return weights[buyer * num_sellers + seller];
    }
    void set_weight(std::size_t buyer, std::size_t seller, double w) {
        weights[buyer * num_sellers + seller] = w;
    }
};

struct MatchEdge {
    std::size_t buyer = 0;
    std::size_t seller = 0;

    friend bool operator==(const MatchEdge&, const MatchEdge&) = default;
};

struct Matching {
    std::vector<MatchEdge> pairs;  // sorted by (buyer, seller)
    double total_weight = 0.0;

    // Seller matched to the given buyer, or npos.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t seller_of(std::size_t buyer) const;
    std::size_t buyer_of(std::size_t seller) const;
};

// Maximum-weight matching (vertices may stay unmatched) via the O(n^3)
// Hungarian method on a zero-padded square matrix. Zero-weight edges are
// never part of the result.
Matching max_weight_matching(const WeightedBipartiteGraph& graph);

// Exhaustive oracle over all partial injective assignments. Requires
// min(|buyers|, |sellers|) <= 8. Ties prefer fewer edges, then the
// lexicographically smallest (buyer, seller) edge list.
Matching brute_force_matching(const WeightedBipartiteGraph& graph);

}  // namespace fmkt
