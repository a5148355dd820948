// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// anything fails. Heavier than the unit tests; expect a few minutes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fmkt/double_auction.hpp"
#include "fmkt/experiments/config.hpp"
#include "fmkt/experiments/runner.hpp"
#include "fmkt/experiments/stats.hpp"
#include "fmkt/matching.hpp"
#include "fmkt/radio/channel.hpp"
#include "fmkt/reverse_auction.hpp"

using namespace fmkt;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail) {
    if (!ok) ++g_failures;
    std::printf("[%s] %2d. %s — %s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

BidVector monotone_schedule(std::mt19937_64& rng, int max_slots, double scale, bool convex) {
    std::uniform_real_distribution<double> inc(0.0, scale);
    std::vector<double> increments(static_cast<std::size_t>(max_slots));
    for (double& d : increments) d = inc(rng);
    std::sort(increments.begin(), increments.end());
    if (!convex) std::reverse(increments.begin(), increments.end());
    BidVector b;
    b.values.push_back(0.0);
    for (const double d : increments) b.values.push_back(b.values.back() + d);
    return b;
}

// --- criterion 1: reverse auction oracle -------------------------------

void criterion_reverse_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<int> num(0, 5), t_dist(1, 15);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        ReverseInstance inst;
        inst.slots_per_round = t_dist(rng);
        std::uniform_int_distribution<int> cap(0, std::min(5, inst.slots_per_round));
        std::uniform_real_distribution<double> rate(0.0, 12.0), mac(0.0, 0.3), dem(1.0, 8.0);
        inst.mue_utility = SigmoidUtility(1.0, dem(rng));
        inst.macro_rate = mac(rng);
        const int I = num(rng);
        for (int i = 0; i < I; ++i) {
            inst.bids.push_back(monotone_schedule(rng, cap(rng), 0.08, true));
            inst.rates.push_back(rate(rng));
        }
        worst = std::max(worst,
                         std::abs(greedy_wd(inst).efficiency - exhaustive_wd(inst).efficiency));
    }
    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << "1000 instances, max |Q*_greedy - Q*_exhaustive| = " << worst << ", " << secs << " s";
    report(1, "reverse auction oracle equivalence", worst <= 1e-9 && secs < 60.0, os.str());
}

// --- criterion 2: matching oracle --------------------------------------

void criterion_matching_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1002);
    std::uniform_int_distribution<std::size_t> side(0, 7);
    std::uniform_int_distribution<int> w(0, 9);
    bool exact = true;
    for (int trial = 0; trial < 1000; ++trial) {
        WeightedBipartiteGraph g(side(rng), side(rng));
        for (double& x : g.weights) x = static_cast<double>(w(rng));
        if (max_weight_matching(g).total_weight != brute_force_matching(g).total_weight)
            exact = false;
    }
    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << "1000 integer graphs up to 7x7, exact match, " << secs << " s";
    report(2, "matching oracle equivalence", exact && secs < 30.0, os.str());
}

// --- criterion 3: double auction oracle --------------------------------

void criterion_double_oracle() {
    std::mt19937_64 rng(1003);
    std::uniform_int_distribution<std::size_t> side(0, 4);
    std::uniform_int_distribution<int> cap(0, 5);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        DoubleInstance inst;
        inst.slots_per_round = 20;
        const std::size_t I = side(rng), J = side(rng);
        for (std::size_t j = 0; j < J; ++j)
            inst.seller_asks.push_back(monotone_schedule(rng, cap(rng), 0.05, true));
        inst.buyer_bids.resize(I);
        for (std::size_t i = 0; i < I; ++i)
            for (std::size_t j = 0; j < J; ++j)
                inst.buyer_bids[i].push_back(
                    monotone_schedule(rng, inst.seller_cap(j), 0.08, false));
        worst = std::max(worst, std::abs(double_wd(inst).efficiency -
                                         exhaustive_double_wd(inst).efficiency));
    }
    std::ostringstream os;
    os << "1000 instances, max efficiency gap = " << worst;
    report(3, "double auction oracle equivalence", worst <= 1e-9, os.str());
}

// --- criteria 4/5/6: truthfulness, IR, feasibility over simulations ----

ExperimentConfig base_config() {
    ExperimentConfig cfg;
    cfg.master_seed = 20260826;
    return cfg;
}

std::vector<TruthRecord> g_truth_records;

void criterion_truthfulness() {
    ExperimentConfig cfg = base_config();
    cfg.truthfulness_rounds = 500;
    g_truth_records = run_truthfulness(cfg);
    double min_delta = 0.0;
    std::map<TruthPanel, int> per_panel;
    for (const TruthRecord& r : g_truth_records) {
        min_delta = std::min(min_delta, r.delta_utility);
        ++per_panel[r.panel];
    }
    bool enough = per_panel.size() == 3;
    for (const auto& [panel, count] : per_panel)
        enough = enough && count >= 500 * 4;  // rounds x manipulation factors
    std::ostringstream os;
    os << g_truth_records.size() << " manipulations over 3 panels, min dU = " << min_delta;
    report(4, "truthfulness (500 rounds/panel, f in {0.5,0.8,1.5,2})",
           enough && min_delta >= -1e-9, os.str());
}

std::vector<SweepPoint> g_density_points, g_mue_points, g_demand_points;
double g_density_secs = 0.0;

void run_all_sweeps() {
    ExperimentConfig cfg = base_config();
    cfg.rounds = 500;
    const auto t0 = Clock::now();
    g_density_points = run_density_sweep(cfg);
    g_density_secs = seconds_since(t0);
    cfg.rounds = 200;
    g_mue_points = run_mue_count_sweep(cfg);
    g_demand_points = run_demand_sweep(cfg);
}

void criterion_ir_and_feasibility() {
    // The round runners assert slot/matching feasibility structurally and
    // throw on any violation, so reaching this point means criterion 6
    // held on every allocation; here we re-check the recorded IR probes.
    double min_u = 0.0;
    std::size_t rounds = 0;
    for (const std::vector<SweepPoint>* sweep :
         {&g_density_points, &g_mue_points, &g_demand_points})
        for (const SweepPoint& p : *sweep)
            for (const RoundRecord& r : p.rounds) {
                min_u = std::min(min_u, r.min_agent_utility);
                ++rounds;
            }
    std::ostringstream os;
    os << rounds << " rounds, min truthful agent utility = " << min_u;
    report(5, "individual rationality", rounds > 0 && min_u >= -1e-9, os.str());
    report(6, "allocation feasibility", rounds > 0,
           "structural assertions held on every allocation in every run");
}

// --- criterion 7: density trend ----------------------------------------

const SweepPoint* find_point(const std::vector<SweepPoint>& points, double x, double series) {
    for (const SweepPoint& p : points)
        if (std::abs(p.x - x) < 1e-9 && std::abs(p.series - series) < 1e-9) return &p;
    return nullptr;
}

void criterion_density_trend() {
    std::vector<double> xs, means;
    for (const SweepPoint& p : g_density_points) {
        xs.push_back(p.x);
        means.push_back(p.utility.mean);
    }
    const double rho = spearman_rho(xs, means);
    const SweepPoint* d05 = find_point(g_density_points, 0.5, 0.5);
    const SweepPoint* d08 = find_point(g_density_points, 0.8, 0.8);
    bool high_density_ok = true;
    for (const SweepPoint& p : g_density_points)
        if (p.x >= 0.5 - 1e-9) high_density_ok = high_density_ok && p.improvement.mean > 50.0;
    std::ostringstream os;
    os << "rho = " << rho << "; improvement at density 0.5 = "
       << (d05 ? d05->improvement.mean : -1.0) << "% (reference 127%), at 0.8 = "
       << (d08 ? d08->improvement.mean : -1.0) << "% (reference 166%); " << g_density_secs
       << " s for 500 rounds/point";
    report(7, "density trend (utility up, >50% improvement at density >= 0.5)",
           rho > 0.9 && d05 && d08 && high_density_ok && g_density_secs < 600.0, os.str());
}

// --- criterion 8: MUE count trend --------------------------------------

void criterion_mue_count_trend() {
    // per-density series: utility decreasing in MUE count
    std::map<double, std::vector<std::pair<double, double>>> by_density;
    for (const SweepPoint& p : g_mue_points)
        by_density[p.series].push_back({p.x, p.utility.mean});
    bool decreasing = !by_density.empty();
    double worst_rho = -1.0;
    for (auto& [density, series] : by_density) {
        std::sort(series.begin(), series.end());
        std::vector<double> xs, means;
        for (const auto& [x, m] : series) {
            xs.push_back(x);
            means.push_back(m);
        }
        const double rho = spearman_rho(xs, means);
        worst_rho = std::max(worst_rho, rho);
        decreasing = decreasing && rho < -0.8;
    }
    // at each fixed count, mean utility over densities must rise
    std::map<double, std::vector<std::pair<double, double>>> by_count;
    for (const SweepPoint& p : g_mue_points)
        by_count[p.x].push_back({p.series, p.utility.mean});
    int rising = 0;
    for (auto& [count, series] : by_count) {
        std::sort(series.begin(), series.end());
        bool up = true;
        for (std::size_t k = 1; k < series.size(); ++k)
            up = up && series[k].second >= series[k - 1].second;
        if (up) ++rising;
    }
    const bool density_up = rising == static_cast<int>(by_count.size());
    std::ostringstream os;
    os << "worst per-density rho = " << worst_rho << "; utility rises with density at "
       << rising << "/" << by_count.size() << " MUE counts";
    report(8, "MUE count trend (utility down in count, up in density)",
           decreasing && density_up, os.str());
}

// --- criterion 9: demand trend -----------------------------------------

void criterion_demand_trend() {
    bool ok = true;
    std::ostringstream os;
    for (const double series : {0.0, 1.0}) {
        std::vector<double> xs, means;
        for (const SweepPoint& p : g_demand_points)
            if (std::abs(p.series - series) < 1e-9) {
                xs.push_back(p.x);
                means.push_back(p.utility.mean);
            }
        const double rho = spearman_rho(xs, means);
        const SweepPoint* at10 = find_point(g_demand_points, 10.0, series);
        const double imp = at10 ? at10->improvement.mean : -1.0;
        ok = ok && rho < 0.0 && at10 && imp > 0.0;
        os << (series == 0.0 ? "SingleMUE" : "MultiMUE") << ": rho = " << rho
           << ", improvement at 10 Mb/s = " << imp << "% (reference 150%)"
           << (series == 0.0 ? "; " : "");
    }
    report(9, "demand trend (utility down, improvement > 0 at 10 Mb/s)", ok, os.str());
}

// --- criterion 10: determinism -----------------------------------------

void criterion_determinism() {
    ExperimentConfig cfg = base_config();
    cfg.rounds = 20;
    cfg.truthfulness_rounds = 10;
    cfg.density_grid = {0.3, 0.7, 1.0};
    cfg.mue_count_grid = {2, 6};
    cfg.mue_sweep_density_grid = {0.5, 1.0};
    cfg.max_demand_grid = {2.0, 6.0, 10.0};

    auto run_once = [&cfg] {
        std::string all = sweep_csv_text(run_density_sweep(cfg));
        all += sweep_csv_text(run_mue_count_sweep(cfg));
        all += sweep_csv_text(run_demand_sweep(cfg));
        const std::vector<TruthRecord> truth = run_truthfulness(cfg);
        for (const TruthPanel panel : {TruthPanel::single_mue_femto,
                                       TruthPanel::multi_mue_femto,
                                       TruthPanel::multi_mue_buyer})
            all += truthfulness_csv_text(truth, panel);
        return all;
    };
    const std::string first = run_once();
    const std::string second = run_once();
    const std::size_t h1 = std::hash<std::string>{}(first);
    const std::size_t h2 = std::hash<std::string>{}(second);
    std::ostringstream os;
    os << first.size() << " CSV bytes, hashes " << std::hex << h1 << " / " << h2;
    report(10, "determinism under a fixed master seed", first == second && h1 == h2, os.str());
}

// --- criterion 11: channel statistics ----------------------------------

void criterion_channel_stats() {
    ChannelParams params;
    std::mt19937_64 rng(1011);
    const int n = 100000;
    double shadow_sum = 0.0, shadow_sq = 0.0, fade_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double s = draw_shadow_db(rng, params);
        shadow_sum += s;
        shadow_sq += s * s;
        fade_sum += draw_fade_gain(rng, params);
    }
    const double mean = shadow_sum / n;
    const double shadow_std = std::sqrt(shadow_sq / n - mean * mean);
    const double fade_mean = fade_sum / n;

    bool spots = true;
    for (const double d : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 150.0, 200.0, 300.0}) {
        const double macro_expect = 17.39 + 3.76 * std::log10(d);
        const double femto_expect = 38.46 + 20.0 * std::log10(d) + 0.7 * d;
        spots = spots &&
                std::abs(path_loss_macro_db(d) - macro_expect) <= 1e-12 * macro_expect &&
                std::abs(path_loss_femto_db(d) - femto_expect) <= 1e-12 * femto_expect;
    }
    std::ostringstream os;
    os << "shadowing std = " << shadow_std << " dB, Rayleigh mean power = " << fade_mean
       << ", 10 path-loss spot checks " << (spots ? "exact" : "off");
    report(11, "channel model statistics",
           std::abs(shadow_std - 8.0) <= 0.16 && std::abs(fade_mean - 1.0) <= 0.02 && spots,
           os.str());
}

}  // namespace

int main() {
    try {
        criterion_reverse_oracle();
        criterion_matching_oracle();
        criterion_double_oracle();
        criterion_truthfulness();
        run_all_sweeps();
        criterion_ir_and_feasibility();
        criterion_density_trend();
        criterion_mue_count_trend();
        criterion_demand_trend();
        criterion_determinism();
        criterion_channel_stats();
    } catch (const std::exception& e) {
        std::printf("[FAIL] acceptance suite aborted: %s\n", e.what());
        return 1;
    }
    if (g_failures == 0) {
        std::printf("all 11 acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", g_failures);
    return 1;
}
