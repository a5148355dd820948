#include "fmkt/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fmkt {

namespace {

constexpr double kTieTol = 1e-9;

void require_valid(const WeightedBipartiteGraph& g) {
    if (g.weights.size() != g.num_buyers * g.num_sellers)
        throw std::invalid_argument("WeightedBipartiteGraph: weight matrix size mismatch");
    for (const double w : g.weights) {
        if (!std::isfinite(w))
            throw std::domain_error("WeightedBipartiteGraph: non-finite weight");
        if (w < 0.0)
            throw std::domain_error("WeightedBipartiteGraph: negative weight");
    }
}

// Jonker-Volgenant style shortest augmenting path assignment on an n x n
// cost matrix (minimization). Returns seller index per row.
std::vector<std::size_t> square_min_assignment(const std::vector<double>& cost, std::size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n, 0);
    for (std::size_t j = 1; j <= n; ++j)
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

struct BruteState {
    const WeightedBipartiteGraph* g = nullptr;
    std::vector<char> seller_used;
    std::vector<MatchEdge> current;
    std::vector<MatchEdge> best;
    double best_weight = 0.0;
    bool have_best = false;
};

bool lex_less(const std::vector<MatchEdge>& a, const std::vector<MatchEdge>& b) {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(), [](const MatchEdge& x, const MatchEdge& y) {
            return x.buyer != y.buyer ? x.buyer < y.buyer : x.seller < y.seller;
        });
}

void brute_consider(BruteState& st, double weight) {
    if (!st.have_best || weight > st.best_weight + kTieTol) {
        st.best = st.current;
        st.best_weight = weight;
        st.have_best = true;
        return;
    }
    if (weight > st.best_weight - kTieTol) {
        if (st.current.size() < st.best.size() ||
            (st.current.size() == st.best.size() && lex_less(st.current, st.best))) {
            st.best = st.current;
            st.best_weight = std::max(st.best_weight, weight);
        }
    }
}

void brute_recurse(BruteState& st, std::size_t buyer, double weight) {
    if (buyer == st.g->num_buyers) {
        brute_consider(st, weight);
        return;
    }
    brute_recurse(st, buyer + 1, weight);  // buyer stays unmatched
    for (std::size_t s = 0; s < st.g->num_sellers; ++s) {
        if (st.seller_used[s]) continue;
        const double w = st.g->weight(buyer, s);
        if (w <= 0.0) continue;
        st.seller_used[s] = 1;
        st.current.push_back({buyer, s});
        brute_recurse(st, buyer + 1, weight + w);
        st.current.pop_back();
        st.seller_used[s] = 0;
    }
}

}  // namespace

std::size_t Matching::seller_of(std::size_t buyer) const {
    for (const MatchEdge& e : pairs)
        if (e.buyer == buyer) return e.seller;
    return npos;
}

std::size_t Matching::buyer_of(std::size_t seller) const {
    for (const MatchEdge& e : pairs)
        if (e.seller == seller) return e.buyer;
    return npos;
}

Matching max_weight_matching(const WeightedBipartiteGraph& graph) {
    require_valid(graph);
    Matching result;
    const std::size_t n = std::max(graph.num_buyers, graph.num_sellers);
    if (n == 0) return result;

    // Pad to square with zero weights (= staying unmatched) and minimize
    // the negated weights.
    std::vector<double> cost(n * n, 0.0);
    for (std::size_t b = 0; b < graph.num_buyers; ++b)
        for (std::size_t s = 0; s < graph.num_sellers; ++s)
            cost[b * n + s] = -graph.weight(b, s);

    const std::vector<std::size_t> row_to_col = square_min_assignment(cost, n);
    for (std::size_t b = 0; b < graph.num_buyers; ++b) {
        const std::size_t s = row_to_col[b];
        if (s >= graph.num_sellers) continue;
        const double w = graph.weight(b, s);
        if (w <= 0.0) continue;
        result.pairs.push_back({b, s});
        result.total_weight += w;
    }
    std::sort(result.pairs.begin(), result.pairs.end(), [](const MatchEdge& a, const MatchEdge& b) {
        return a.buyer != b.buyer ? a.buyer < b.buyer : a.seller < b.seller;
    });
    return result;
}

Matching brute_force_matching(const WeightedBipartiteGraph& graph) {
    require_valid(graph);
    if (std::min(graph.num_buyers, graph.num_sellers) > 8)
        throw std::length_error("brute_force_matching: graph too large to enumerate");
    BruteState st;
    st.g = &graph;
    st.seller_used.assign(graph.num_sellers, 0);
    brute_recurse(st, 0, 0.0);
    Matching result;
    result.pairs = std::move(st.best);
    for (const MatchEdge& e : result.pairs)
        result.total_weight += graph.weight(e.buyer, e.seller);
    return result;
}

}  // namespace fmkt
