#include "fmkt/reverse_auction.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fmkt {

namespace {

double aggregate_rate_mbps(const ReverseInstance& inst, const std::vector<int>& slots) {
    double sum = 0.0;
    for (std::size_t i = 0; i < slots.size(); ++i)
        sum += static_cast<double>(slots[i]) * inst.rates[i];
    return sum / inst.slots_per_round;
}

double objective(const ReverseInstance& inst, const std::vector<int>& slots) {
    double cost = 0.0;
    for (std::size_t i = 0; i < slots.size(); ++i) cost += inst.bids[i].at(slots[i]);
    return inst.mue_utility.value(aggregate_rate_mbps(inst, slots)) - cost -
           inst.mue_utility.value(inst.macro_rate);
}

// Macro fallback: the MUE always holds the no-trade option worth 0 (it
// just stays on the macro BS), so any allocation whose net efficiency is
// negative is voided. A nonnegative objective also implies the achieved
// rate beats the macro baseline.
ReverseAllocation finish(const ReverseInstance& inst, std::vector<int> slots) {
    ReverseAllocation alloc;
    const double q = objective(inst, slots);
    if (q < 0.0) {
        std::fill(slots.begin(), slots.end(), 0);
        alloc.slots = std::move(slots);
        alloc.efficiency = 0.0;
        return alloc;
    }
    alloc.efficiency = q;
    alloc.slots = std::move(slots);
    return alloc;
}

void require_valid(const ReverseInstance& inst) {
    const InstanceDefect defect = validate_bids(inst);
    if (!defect.ok())
        throw std::invalid_argument("ReverseInstance: femtocell " + std::to_string(defect.femto) +
                                    ": " + defect.bid.message());
}

ReverseInstance without_femto(const ReverseInstance& inst, std::size_t i) {
    ReverseInstance sub = inst;
    sub.bids.erase(sub.bids.begin() + static_cast<std::ptrdiff_t>(i));
    sub.rates.erase(sub.rates.begin() + static_cast<std::ptrdiff_t>(i));
    return sub;
}

// The per-slot greedy is not globally optimal when link rates are
// heterogeneous (a cheap low-rate bundle can beat one expensive high-rate
// slot), and VCG pricing silently loses truthfulness on an inexact
// winner determination. This refinement closes the gap exactly: a
// Pareto-front dynamic program over femtocells with state (slots used,
// aggregate rate, total cost), pruned by
//   - a provably safe per-femtocell cap: slot k cannot be part of any
//     optimum once its increment exceeds the best-case marginal utility
//     U(k r/T) - U((k-1) r/T),
//   - an optimistic-completion bound against the greedy incumbent,
//   - a curvature-strengthened dominance test between front points.
class ExactRefiner {
public:
    ExactRefiner(const ReverseInstance& inst) : inst_(inst), T_(inst.slots_per_round) {}

    // Returns the optimal slot vector, or `incumbent` if it already is one.
    std::vector<int> solve(std::vector<int> incumbent) {
        setup();
        const std::size_t F = order_.size();
        double best = raw_objective(incumbent);
        std::ptrdiff_t best_point = -1;
        std::size_t best_layer = 0;

        std::vector<std::vector<std::size_t>> front(static_cast<std::size_t>(T_) + 1);
        points_.push_back({0.0, 0.0, -1, 0});
        front[0].push_back(0);

        std::vector<Point> layer;
        for (std::size_t j = 0; j < F; ++j) {
            std::vector<std::vector<std::size_t>> next(static_cast<std::size_t>(T_) + 1);
            for (int t = 0; t <= T_; ++t) {
                for (const std::size_t id : front[static_cast<std::size_t>(t)]) {
                    const Point p = points_[id];
                    const int hi = std::min(cap_[j], T_ - t);
                    for (int x = 0; x <= hi; ++x) {
                        points_.push_back({p.rate_sum + x * rate_[j], p.cost + prefix_[j][x],
                                           static_cast<std::ptrdiff_t>(id), x});
                        next[static_cast<std::size_t>(t + x)].push_back(points_.size() - 1);
                    }
                }
            }
            for (int t = 0; t <= T_; ++t) {
                auto& bucket = next[static_cast<std::size_t>(t)];
                if (bucket.empty()) continue;
                std::sort(bucket.begin(), bucket.end(), [this](std::size_t a, std::size_t b) {
                    return points_[a].rate_sum > points_[b].rate_sum ||
                           (points_[a].rate_sum == points_[b].rate_sum &&
                            points_[a].cost < points_[b].cost);
                });
                std::vector<std::size_t> keep;
                const double extra = suffix_rate_[j + 1][static_cast<std::size_t>(T_ - t)];
                for (const std::size_t id : bucket) {
                    const Point& p = points_[id];
                    const double q = value(p.rate_sum) - p.cost;
                    if (q > best + 1e-13) {
                        best = q;
                        best_point = static_cast<std::ptrdiff_t>(id);
                        best_layer = j;
                    }
                    if (value(p.rate_sum + extra) - p.cost <= best + 1e-13) continue;
                    if (!keep.empty()) {
                        const Point& a = points_[keep.back()];
                        if (a.cost <= p.cost + 1e-15) continue;
                        const double margin =
                            value(a.rate_sum + extra) - value(p.rate_sum + extra);
                        if (a.cost - p.cost <= margin + 1e-15) continue;
                    }
                    keep.push_back(id);
                }
                bucket = std::move(keep);
            }
            front = std::move(next);
        }
        if (best_point < 0) return incumbent;

        // The winning point's chain covers femtocells order_[0..best_layer];
        // everything after it stays at zero.
        std::vector<int> slots(inst_.num_femtos(), 0);
        std::ptrdiff_t id = best_point;
        for (std::size_t j = best_layer + 1; j-- > 0;) {
            slots[static_cast<std::size_t>(order_[j])] = points_[static_cast<std::size_t>(id)].taken;
            id = points_[static_cast<std::size_t>(id)].parent;
        }
        return slots;
    }

private:
    struct Point {
        double rate_sum = 0.0;
        double cost = 0.0;
        std::ptrdiff_t parent = -1;
        int taken = 0;
    };

    double value(double rate_sum) const { return inst_.mue_utility.value(rate_sum / T_); }

    double raw_objective(const std::vector<int>& slots) const {
        double cost = 0.0, rate_sum = 0.0;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            cost += inst_.bids[i].at(slots[i]);
            rate_sum += slots[i] * inst_.rates[i];
        }
        return value(rate_sum) - cost;
    }

    void setup() {
        const std::size_t I = inst_.num_femtos();
        std::vector<int> ids(I);
        std::iota(ids.begin(), ids.end(), 0);
        std::stable_sort(ids.begin(), ids.end(),
                         [this](int a, int b) { return inst_.rates[a] > inst_.rates[b]; });
        for (const int id : ids) {
            const double r = inst_.rates[id];
            const int n = std::min(inst_.bids[id].max_slots(), T_);
            int k = 0;
            while (k < n) {
                const double d = inst_.bids[id].at(k + 1) - inst_.bids[id].at(k);
                if (d > value((k + 1) * r) - value(k * r)) break;
                ++k;
            }
            if (k == 0 || r <= 0.0) continue;
            order_.push_back(id);
            cap_.push_back(k);
            rate_.push_back(r);
            std::vector<double> pre(static_cast<std::size_t>(k) + 1, 0.0);
            for (int s = 1; s <= k; ++s) pre[static_cast<std::size_t>(s)] = inst_.bids[id].at(s);
            prefix_.push_back(std::move(pre));
        }
        const std::size_t F = order_.size();
        suffix_rate_.assign(F + 1, std::vector<double>(static_cast<std::size_t>(T_) + 1, 0.0));
        for (std::size_t j = F; j-- > 0;)
            for (int m = 0; m <= T_; ++m) {
                const int take = std::min(cap_[j], m);
                suffix_rate_[j][static_cast<std::size_t>(m)] =
                    take * rate_[j] + suffix_rate_[j + 1][static_cast<std::size_t>(m - take)];
            }
    }

    const ReverseInstance& inst_;
    int T_;
    std::vector<int> order_, cap_;
    std::vector<double> rate_;
    std::vector<std::vector<double>> prefix_;
    std::vector<std::vector<double>> suffix_rate_;
    std::vector<Point> points_;
};

}  // namespace

int ReverseAllocation::total_slots() const {
    return std::accumulate(slots.begin(), slots.end(), 0);
}

InstanceDefect validate_bids(const ReverseInstance& inst) {
    if (inst.slots_per_round < 1)
        throw std::invalid_argument("ReverseInstance: T must be >= 1");
    if (inst.bids.size() != inst.rates.size())
        throw std::invalid_argument("ReverseInstance: bids/rates size mismatch");
    for (std::size_t i = 0; i < inst.bids.size(); ++i) {
        if (inst.rates[i] < 0.0)
            throw std::invalid_argument("ReverseInstance: negative rate for femtocell " +
                                        std::to_string(i));
        if (inst.bids[i].max_slots() > inst.slots_per_round)
            throw std::invalid_argument("ReverseInstance: N_i exceeds T for femtocell " +
                                        std::to_string(i));
        const BidValidation v = validate_bid(inst.bids[i], /*require_convex=*/true);
        if (!v.ok()) return {i, v};
    }
    return {};
}

ReverseAllocation greedy_wd(const ReverseInstance& inst, GreedyStats* stats) {
    require_valid(inst);
    const int T = inst.slots_per_round;
    const std::size_t I = inst.num_femtos();

    std::vector<int> slots(I, 0);
    std::vector<char> open(I, 0);
    for (std::size_t i = 0; i < I; ++i) open[i] = inst.bids[i].max_slots() > 0;

    double leased_rate = 0.0;  // sum n_j R_j
    for (int granted = 0; granted < T; ++granted) {
        const double u_now = inst.mue_utility.value(leased_rate / T);
        double best = 0.0;
        std::ptrdiff_t best_i = -1;
        for (std::size_t i = 0; i < I; ++i) {
            if (!open[i]) continue;
            const double gain =
                inst.mue_utility.value((leased_rate + inst.rates[i]) / T) - u_now;
            const double cost = inst.bids[i].at(slots[i] + 1) - inst.bids[i].at(slots[i]);
            const double delta = gain - cost;
            if (stats) ++stats->evaluations;
            if (delta > 0.0 && delta > best) {
                best = delta;
                best_i = static_cast<std::ptrdiff_t>(i);
            }
        }
        if (best_i < 0) break;  // no strictly profitable slot left
        const auto w = static_cast<std::size_t>(best_i);
        ++slots[w];
        leased_rate += inst.rates[w];
        if (slots[w] == inst.bids[w].max_slots()) open[w] = 0;
        if (stats) ++stats->iterations;
    }
    return finish(inst, ExactRefiner(inst).solve(std::move(slots)));
}

ReverseAllocation exhaustive_wd(const ReverseInstance& inst) {
    require_valid(inst);
    const std::size_t I = inst.num_femtos();

    double combos = 1.0;
    for (const BidVector& b : inst.bids) combos *= b.max_slots() + 1;
    if (combos > 1e7)
        throw std::length_error("exhaustive_wd: instance too large to enumerate");

    std::vector<int> current(I, 0);
    std::vector<int> best_slots(I, 0);
    double best_q = objective(inst, current);

    // Odometer over (n_1, ..., n_I) in lexicographic order; strict
    // improvement keeps the lexicographically smallest maximizer.
    while (true) {
        std::size_t pos = I;
        while (pos > 0) {
            --pos;
            if (current[pos] < inst.bids[pos].max_slots()) {
                ++current[pos];
                std::fill(current.begin() + static_cast<std::ptrdiff_t>(pos) + 1, current.end(), 0);
                break;
            }
            if (pos == 0) return finish(inst, std::move(best_slots));
        }
        if (I == 0) break;
        const int total = std::accumulate(current.begin(), current.end(), 0);
        if (total > inst.slots_per_round) continue;
        const double q = objective(inst, current);
        if (q > best_q) {
            best_q = q;
            best_slots = current;
        }
    }
    return finish(inst, std::move(best_slots));
}

double vcg_price(const ReverseInstance& inst, const ReverseAllocation& alloc, std::size_t i) {
    if (i >= inst.num_femtos())
        throw std::out_of_range("vcg_price: unknown femtocell id");
    if (alloc.slots.size() != inst.num_femtos())
        throw std::invalid_argument("vcg_price: allocation does not match instance");
    if (alloc.slots[i] == 0) return 0.0;
    const double q_without = greedy_wd(without_femto(inst, i)).efficiency;
    return inst.bids[i].at(alloc.slots[i]) + (alloc.efficiency - q_without);
}

ReverseSettlement settle_reverse(const ReverseInstance& inst, const ReverseAllocation& alloc,
                                 const std::vector<BidVector>& true_values) {
    if (true_values.size() != inst.num_femtos())
        throw std::invalid_argument("settle_reverse: true value schedule size mismatch");
    const std::size_t I = inst.num_femtos();
    ReverseSettlement s;
    s.payments.assign(I, 0.0);
    s.utilities.assign(I, 0.0);
    for (std::size_t i = 0; i < I; ++i) {
        if (alloc.slots[i] == 0) continue;
        s.payments[i] = vcg_price(inst, alloc, i);
        s.utilities[i] = s.payments[i] - true_values[i].at(alloc.slots[i]);
        s.mue_total_payment += s.payments[i];
    }
    const double achieved = alloc.total_slots() > 0
                                ? inst.mue_utility.value(aggregate_rate_mbps(inst, alloc.slots))
                                : inst.mue_utility.value(inst.macro_rate);
    s.mue_net_utility = achieved - s.mue_total_payment;
    return s;
}

}  // namespace fmkt
