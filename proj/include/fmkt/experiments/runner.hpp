#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fmkt/double_auction.hpp"
#include "fmkt/experiments/config.hpp"
#include "fmkt/experiments/stats.hpp"
#include "fmkt/reverse_auction.hpp"
#include "fmkt/valuation.hpp"

namespace fmkt {

// One fully instantiated auction round: geometry, channel draws, truthful
// valuations and the instances built from them.
struct RoundWorld {
    Topology topo;
    ChannelRealization chan;
    std::vector<FemtoValuationModel> femto_models;  // per femtocell
    std::vector<BidVector> femto_true_bids;         // truthful v_j schedules
    std::vector<MueValuationModel> mue_models;      // per MUE
    std::vector<double> macro_rates;                // per MUE
    std::uint64_t seed = 0;
};

RoundWorld make_round_world(const ExperimentConfig& cfg, double density, int num_mues,
                            double max_demand, std::uint64_t seed);

ReverseInstance make_reverse_instance(const ExperimentConfig& cfg, const RoundWorld& world,
                                      std::size_t mue_index = 0);
DoubleInstance make_double_instance(const ExperimentConfig& cfg, const RoundWorld& world);

struct RoundRecord {
    int round = 0;
    std::uint64_t seed = 0;
    double density = 0.0;
    int mue_count = 0;
    double max_demand = 0.0;
    int num_femtos = 0;
    double efficiency = 0.0;
    double mue_avg_utility = 0.0;   // mean net MUE gain over the macro baseline
    double baseline_utility = 0.0;  // mean U(R_mac)
    double total_payments = 0.0;
    double budget_balance = 0.0;    // MultiMUE only
    double min_agent_utility = 0.0; // IR probe over every participating agent
};

// Per-round feasibility + individual-rationality checks; throws
// InvariantViolation on the first failure.
RoundRecord run_single_mue_round(const ExperimentConfig& cfg, double density, double max_demand,
                                 std::uint64_t seed, int round_index);
RoundRecord run_multi_mue_round(const ExperimentConfig& cfg, double density, int num_mues,
                                double max_demand, std::uint64_t seed, int round_index);

enum class TruthPanel { single_mue_femto, multi_mue_femto, multi_mue_buyer };

std::string to_string(TruthPanel p);

struct TruthRecord {
    TruthPanel panel = TruthPanel::single_mue_femto;
    int round = 0;
    double factor = 1.0;
    double delta_utility = 0.0;  // u_truthful - u_manipulated
};

// Fig. 4 style manipulation experiment: a reference agent rebids v * f for
// each factor, density fixed to fixed_density, demand to fixed_max_demand.
std::vector<TruthRecord> run_truthfulness(const ExperimentConfig& cfg);

struct SweepPoint {
    double x = 0.0;        // swept parameter value
    double series = 0.0;   // secondary parameter (density / scenario tag)
    Aggregate utility;     // MUE net utility over baseline
    Aggregate improvement; // (utility - baseline) / baseline, percent
    Aggregate baseline;
    std::vector<RoundRecord> rounds;
};

std::vector<SweepPoint> run_density_sweep(const ExperimentConfig& cfg);
std::vector<SweepPoint> run_mue_count_sweep(const ExperimentConfig& cfg);
// Demand sweep runs both scenarios; series = 0 for SingleMUE, 1 for MultiMUE.
std::vector<SweepPoint> run_demand_sweep(const ExperimentConfig& cfg);

// Plot-ready CSV emission (one tidy file per figure panel) plus a column
// README and a manifest capturing config + seed.
void emit_truthfulness_csv(const ExperimentConfig& cfg, const std::vector<TruthRecord>& records,
                           const std::string& out_dir);
void emit_sweep_csv(const ExperimentConfig& cfg, const std::vector<SweepPoint>& points,
                    const std::string& sweep_name, const std::string& out_dir);
void emit_round_records_csv(const std::vector<RoundRecord>& records, const std::string& path);
void emit_manifest(const ExperimentConfig& cfg, const std::string& out_dir);

std::string truthfulness_csv_text(const std::vector<TruthRecord>& records, TruthPanel panel);
std::string sweep_csv_text(const std::vector<SweepPoint>& points);
std::string round_records_csv_text(const std::vector<RoundRecord>& records);

}  // namespace fmkt
