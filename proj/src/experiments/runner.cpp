#include "fmkt/experiments/runner.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fmkt/experiments/io.hpp"
#include "fmkt/rng.hpp"

namespace fmkt {

namespace {

constexpr double kIrTol = 1e-9;
constexpr double kMinFueDemand = 1e-6;  // Mb/s, clamp for zero draws

constexpr std::uint64_t kTagWorld = 0x776f726cULL;
constexpr std::uint64_t kTagDensity = 0x64656e73ULL;
constexpr std::uint64_t kTagMueCount = 0x6d756573ULL;
constexpr std::uint64_t kTagDemand = 0x64656d64ULL;
constexpr std::uint64_t kTagTruth = 0x74727574ULL;

void check_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw InvariantViolation(std::string("non-finite value in ") + what);
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

RoundWorld make_round_world(const ExperimentConfig& cfg, double density, int num_mues,
                            double max_demand, std::uint64_t seed) {
    RoundWorld world;
    world.seed = seed;
    world.topo = generate_topology(density, num_mues, mix_seed(seed, kTagWorld, 1));
    world.chan = sample_round(world.topo, cfg.channel, 0, mix_seed(seed, kTagWorld, 2));

    const std::size_t F = world.topo.num_femtos();
    const std::size_t M = world.topo.num_mues();

    std::mt19937_64 demand_rng(mix_seed(seed, kTagWorld, 3));
    std::uniform_real_distribution<double> demand(0.0, max_demand);

    world.femto_models.reserve(F);
    world.femto_true_bids.reserve(F);
    for (std::size_t f = 0; f < F; ++f) {
        FemtoValuationModel model;
        model.slots_per_round = cfg.slots_per_round;
        for (int k = 0; k < kFuesPerFemto; ++k) {
            const double r_dem = std::max(demand(demand_rng), kMinFueDemand);
            model.fue_utilities.emplace_back(cfg.satisfaction_factor, r_dem);
            model.fue_rates.push_back(
                world.chan.femto_to_own_fue[f][static_cast<std::size_t>(k)].rate_mbps);
        }
        world.femto_true_bids.push_back(model.truthful_bid(cfg.slots_per_round));
        world.femto_models.push_back(std::move(model));
    }

    world.mue_models.reserve(M);
    world.macro_rates.reserve(M);
    for (std::size_t m = 0; m < M; ++m) {
        MueValuationModel model;
        model.utility = SigmoidUtility(cfg.satisfaction_factor, cfg.mue_demand_mbps);
        model.macro_rate = world.chan.macro_to_mue[m].rate_mbps;
        model.slots_per_round = cfg.slots_per_round;
        for (std::size_t f = 0; f < F; ++f)
            model.link_rates.push_back(world.chan.femto_mue(f, m).rate_mbps);
        world.macro_rates.push_back(model.macro_rate);
        world.mue_models.push_back(std::move(model));
    }
    return world;
}

ReverseInstance make_reverse_instance(const ExperimentConfig& cfg, const RoundWorld& world,
                                      std::size_t mue_index) {
    ReverseInstance inst;
    inst.bids = world.femto_true_bids;
    inst.slots_per_round = cfg.slots_per_round;
    inst.mue_utility = SigmoidUtility(cfg.satisfaction_factor, cfg.mue_demand_mbps);
    inst.macro_rate = world.macro_rates.at(mue_index);
    inst.rates.reserve(world.topo.num_femtos());
    for (std::size_t f = 0; f < world.topo.num_femtos(); ++f)
        inst.rates.push_back(world.chan.femto_mue(f, mue_index).rate_mbps);
    return inst;
}

DoubleInstance make_double_instance(const ExperimentConfig& cfg, const RoundWorld& world) {
    DoubleInstance inst;
    inst.slots_per_round = cfg.slots_per_round;
    inst.seller_asks = world.femto_true_bids;
    inst.buyer_bids.reserve(world.mue_models.size());
    for (const MueValuationModel& mue : world.mue_models) {
        std::vector<BidVector> row;
        row.reserve(world.topo.num_femtos());
        for (std::size_t f = 0; f < world.topo.num_femtos(); ++f)
            row.push_back(mue.truthful_bid(f, cfg.slots_per_round));
        inst.buyer_bids.push_back(std::move(row));
    }
    return inst;
}

RoundRecord run_single_mue_round(const ExperimentConfig& cfg, double density, double max_demand,
                                 std::uint64_t seed, int round_index) {
    const RoundWorld world = make_round_world(cfg, density, 1, max_demand, seed);
    const ReverseInstance inst = make_reverse_instance(cfg, world, 0);
    const ReverseAllocation alloc = greedy_wd(inst);

    if (alloc.total_slots() > cfg.slots_per_round)
        throw InvariantViolation("single-mue round: total leased slots exceed T");
    for (std::size_t i = 0; i < inst.num_femtos(); ++i)
        if (alloc.slots[i] < 0 || alloc.slots[i] > inst.bids[i].max_slots())
            throw InvariantViolation("single-mue round: per-femtocell cap violated");

    const ReverseSettlement settle = settle_reverse(inst, alloc, world.femto_true_bids);

    RoundRecord rec;
    rec.round = round_index;
    rec.seed = seed;
    rec.density = density;
    rec.mue_count = 1;
    rec.max_demand = max_demand;
    rec.num_femtos = static_cast<int>(inst.num_femtos());
    rec.efficiency = alloc.efficiency;
    rec.baseline_utility = inst.mue_utility.value(inst.macro_rate);
    rec.mue_avg_utility = settle.mue_net_utility - rec.baseline_utility;
    rec.total_payments = settle.mue_total_payment;
    rec.min_agent_utility = 0.0;
    for (const double u : settle.utilities) {
        check_finite(u, "single-mue utilities");
        rec.min_agent_utility = std::min(rec.min_agent_utility, u);
        if (u < -kIrTol)
            throw InvariantViolation("single-mue round: femtocell utility below zero");
    }
    check_finite(rec.mue_avg_utility, "single-mue MUE utility");
    return rec;
}

RoundRecord run_multi_mue_round(const ExperimentConfig& cfg, double density, int num_mues,
                                double max_demand, std::uint64_t seed, int round_index) {
    const RoundWorld world = make_round_world(cfg, density, num_mues, max_demand, seed);
    const DoubleInstance inst = make_double_instance(cfg, world);
    const DoubleAllocation alloc = double_wd(inst);

    // one-to-one structure
    std::vector<char> buyer_seen(inst.num_buyers(), 0), seller_seen(inst.num_sellers(), 0);
    for (std::size_t k = 0; k < alloc.matching.pairs.size(); ++k) {
        const MatchEdge& e = alloc.matching.pairs[k];
        if (buyer_seen[e.buyer]++ || seller_seen[e.seller]++)
            throw InvariantViolation("multi-mue round: one-to-one constraint violated");
        if (alloc.pair_slots[k] < 0 || alloc.pair_slots[k] > inst.seller_cap(e.seller))
            throw InvariantViolation("multi-mue round: per-seller cap violated");
    }

    const DoubleSettlement settle = vcg_double_pricing(inst, alloc);

    RoundRecord rec;
    rec.round = round_index;
    rec.seed = seed;
    rec.density = density;
    rec.mue_count = num_mues;
    rec.max_demand = max_demand;
    rec.num_femtos = static_cast<int>(inst.num_sellers());
    rec.efficiency = alloc.efficiency;
    rec.budget_balance = settle.budget_balance;
    check_finite(rec.budget_balance, "multi-mue budget balance");

    double utility_sum = 0.0, baseline_sum = 0.0;
    rec.min_agent_utility = 0.0;
    for (std::size_t i = 0; i < inst.num_buyers(); ++i) {
        const double u = settle.buyer_utilities[i];
        check_finite(u, "multi-mue buyer utilities");
        if (u < -kIrTol)
            throw InvariantViolation("multi-mue round: MUE utility below zero");
        rec.min_agent_utility = std::min(rec.min_agent_utility, u);
        utility_sum += u;
        baseline_sum += world.mue_models[i].utility.value(world.macro_rates[i]);
        rec.total_payments += settle.buyer_payments[i];
    }
    for (const double u : settle.seller_utilities) {
        check_finite(u, "multi-mue seller utilities");
        if (u < -kIrTol)
            throw InvariantViolation("multi-mue round: femtocell utility below zero");
        rec.min_agent_utility = std::min(rec.min_agent_utility, u);
    }
    rec.mue_avg_utility = utility_sum / num_mues;
    rec.baseline_utility = baseline_sum / num_mues;
    return rec;
}

std::string to_string(TruthPanel p) {
    switch (p) {
        case TruthPanel::single_mue_femto: return "single_mue_femto";
        case TruthPanel::multi_mue_femto: return "multi_mue_femto";
        case TruthPanel::multi_mue_buyer: return "multi_mue_buyer";
    }
    return "unknown";
}

namespace {

// Reference femtocell for the SingleMUE panel: the seller most likely to
// win, i.e. the one with the best link to the MUE.
std::size_t reference_femto_single(const ReverseInstance& inst) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < inst.rates.size(); ++i)
        if (inst.rates[i] > inst.rates[best]) best = i;
    return best;
}

double single_femto_utility(const ReverseInstance& inst, const BidVector& true_value,
                            std::size_t femto) {
    const ReverseAllocation alloc = greedy_wd(inst);
    if (alloc.slots[femto] == 0) return 0.0;
    return vcg_price(inst, alloc, femto) - true_value.at(alloc.slots[femto]);
}

double double_seller_utility(const DoubleInstance& inst, const BidVector& true_value,
                             std::size_t seller) {
    const DoubleAllocation alloc = double_wd(inst);
    const std::size_t buyer = alloc.matching.buyer_of(seller);
    if (buyer == Matching::npos) return 0.0;
    int n = 0;
    for (std::size_t k = 0; k < alloc.matching.pairs.size(); ++k)
        if (alloc.matching.pairs[k].seller == seller) n = alloc.pair_slots[k];
    return seller_receipt(inst, alloc, seller) - true_value.at(n);
}

double double_buyer_utility(const DoubleInstance& inst, const MueValuationModel& true_model,
                            std::size_t buyer) {
    const DoubleAllocation alloc = double_wd(inst);
    const std::size_t seller = alloc.matching.seller_of(buyer);
    if (seller == Matching::npos) return 0.0;
    int n = 0;
    for (std::size_t k = 0; k < alloc.matching.pairs.size(); ++k)
        if (alloc.matching.pairs[k].buyer == buyer) n = alloc.pair_slots[k];
    return true_model.value_pair(seller, n) - buyer_payment(inst, alloc, buyer);
}

// Reference seller for the MultiMUE panels: largest best-edge surplus.
std::size_t reference_femto_double(const DoubleInstance& inst) {
    std::size_t best = 0;
    double best_w = -1.0;
    for (std::size_t j = 0; j < inst.num_sellers(); ++j) {
        double w = 0.0;
        for (std::size_t i = 0; i < inst.num_buyers(); ++i)
            w = std::max(w, edge_weight(inst, i, j).weight);
        if (w > best_w) {
            best_w = w;
            best = j;
        }
    }
    return best;
}

}  // namespace

std::vector<TruthRecord> run_truthfulness(const ExperimentConfig& cfg) {
    std::vector<TruthRecord> records;
    const double density = cfg.fixed_density;
    const double max_demand = cfg.fixed_max_demand;

    for (int round = 0; round < cfg.truthfulness_rounds; ++round) {
        // Panel (a): a femtocell in SingleMUE.
        {
            const std::uint64_t seed = mix_seed(cfg.master_seed, kTagTruth, round);
            const RoundWorld world = make_round_world(cfg, density, 1, max_demand, seed);
            if (world.topo.num_femtos() > 0) {
                const ReverseInstance inst = make_reverse_instance(cfg, world, 0);
                const std::size_t ref = reference_femto_single(inst);
                const double u_truth =
                    single_femto_utility(inst, world.femto_true_bids[ref], ref);
                for (const double f : cfg.manipulation_factors) {
                    ReverseInstance manipulated = inst;
                    manipulated.bids[ref] = world.femto_true_bids[ref].scaled(f);
                    const double u_false = single_femto_utility(
                        manipulated, world.femto_true_bids[ref], ref);
                    records.push_back(
                        {TruthPanel::single_mue_femto, round, f, u_truth - u_false});
                }
            }
        }
        // Panels (b)/(c): a femtocell and an MUE in MultiMUE.
        {
            const std::uint64_t seed = mix_seed(cfg.master_seed, kTagTruth + 1, round);
            const RoundWorld world =
                make_round_world(cfg, density, cfg.fixed_mue_count, max_demand, seed);
            if (world.topo.num_femtos() > 0) {
                const DoubleInstance inst = make_double_instance(cfg, world);
                const std::size_t ref_seller = reference_femto_double(inst);
                const double us_truth =
                    double_seller_utility(inst, world.femto_true_bids[ref_seller], ref_seller);
                const std::size_t ref_buyer = 0;
                const double ub_truth =
                    double_buyer_utility(inst, world.mue_models[ref_buyer], ref_buyer);
                for (const double f : cfg.manipulation_factors) {
                    DoubleInstance seller_cheat = inst;
                    seller_cheat.seller_asks[ref_seller] =
                        world.femto_true_bids[ref_seller].scaled(f);
                    const double us_false = double_seller_utility(
                        seller_cheat, world.femto_true_bids[ref_seller], ref_seller);
                    records.push_back(
                        {TruthPanel::multi_mue_femto, round, f, us_truth - us_false});

                    DoubleInstance buyer_cheat = inst;
                    for (BidVector& b : buyer_cheat.buyer_bids[ref_buyer])
                        b = b.scaled(f);
                    const double ub_false = double_buyer_utility(
                        buyer_cheat, world.mue_models[ref_buyer], ref_buyer);
                    records.push_back(
                        {TruthPanel::multi_mue_buyer, round, f, ub_truth - ub_false});
                }
            }
        }
    }
    return records;
}

namespace {

SweepPoint finish_point(double x, double series, std::vector<RoundRecord> rounds) {
    SweepPoint pt;
    pt.x = x;
    pt.series = series;
    std::vector<double> utilities, improvements, baselines;
    utilities.reserve(rounds.size());
    for (const RoundRecord& r : rounds) {
        utilities.push_back(r.mue_avg_utility);
        baselines.push_back(r.baseline_utility);
        improvements.push_back(r.baseline_utility > 0.0
                                   ? 100.0 * r.mue_avg_utility / r.baseline_utility
                                   : 0.0);
    }
    pt.utility = aggregate(utilities);
    pt.improvement = aggregate(improvements);
    pt.baseline = aggregate(baselines);
    pt.rounds = std::move(rounds);
    return pt;
}

}  // namespace

std::vector<SweepPoint> run_density_sweep(const ExperimentConfig& cfg) {
    std::vector<SweepPoint> points;
    for (std::size_t p = 0; p < cfg.density_grid.size(); ++p) {
        const double density = cfg.density_grid[p];
        std::vector<RoundRecord> rounds;
        rounds.reserve(static_cast<std::size_t>(cfg.rounds));
        for (int r = 0; r < cfg.rounds; ++r) {
            const std::uint64_t seed = mix_seed(cfg.master_seed, kTagDensity + p, r);
            rounds.push_back(
                run_single_mue_round(cfg, density, cfg.fixed_max_demand, seed, r));
        }
        points.push_back(finish_point(density, density, std::move(rounds)));
    }
    return points;
}

std::vector<SweepPoint> run_mue_count_sweep(const ExperimentConfig& cfg) {
    std::vector<SweepPoint> points;
    std::size_t tag = 0;
    for (const double density : cfg.mue_sweep_density_grid) {
        for (const int count : cfg.mue_count_grid) {
            std::vector<RoundRecord> rounds;
            rounds.reserve(static_cast<std::size_t>(cfg.rounds));
            for (int r = 0; r < cfg.rounds; ++r) {
                const std::uint64_t seed = mix_seed(cfg.master_seed, kTagMueCount + tag, r);
                rounds.push_back(
                    run_multi_mue_round(cfg, density, count, cfg.fixed_max_demand, seed, r));
            }
            points.push_back(finish_point(count, density, std::move(rounds)));
            ++tag;
        }
    }
    return points;
}

std::vector<SweepPoint> run_demand_sweep(const ExperimentConfig& cfg) {
    std::vector<SweepPoint> points;
    std::size_t tag = 0;
    for (const double demand : cfg.max_demand_grid) {
        std::vector<RoundRecord> single_rounds, multi_rounds;
        single_rounds.reserve(static_cast<std::size_t>(cfg.rounds));
        multi_rounds.reserve(static_cast<std::size_t>(cfg.rounds));
        for (int r = 0; r < cfg.rounds; ++r) {
            const std::uint64_t seed = mix_seed(cfg.master_seed, kTagDemand + tag, r);
            single_rounds.push_back(
                run_single_mue_round(cfg, cfg.fixed_density, demand, seed, r));
            const std::uint64_t seed2 = mix_seed(cfg.master_seed, kTagDemand + tag + 1000, r);
            multi_rounds.push_back(run_multi_mue_round(cfg, cfg.fixed_density,
                                                       cfg.fixed_mue_count, demand, seed2, r));
        }
        points.push_back(finish_point(demand, 0.0, std::move(single_rounds)));
        points.push_back(finish_point(demand, 1.0, std::move(multi_rounds)));
        ++tag;
    }
    return points;
}

std::string truthfulness_csv_text(const std::vector<TruthRecord>& records, TruthPanel panel) {
    std::ostringstream os;
    os << "schema_version,panel,round,factor,delta_utility\n";
    for (const TruthRecord& r : records) {
        if (r.panel != panel) continue;
        os << "1," << to_string(r.panel) << ',' << r.round << ',' << format_double(r.factor)
           << ',' << format_double(r.delta_utility) << '\n';
    }
    return os.str();
}

std::string sweep_csv_text(const std::vector<SweepPoint>& points) {
    std::ostringstream os;
    os << "schema_version,x,series,rounds,mean_utility,utility_ci95,mean_baseline,"
          "mean_improvement_pct,improvement_ci95\n";
    for (const SweepPoint& p : points) {
        os << "1," << format_double(p.x) << ',' << format_double(p.series) << ','
           << p.utility.count << ',' << format_double(p.utility.mean) << ','
           << format_double(p.utility.ci95_half) << ',' << format_double(p.baseline.mean) << ','
           << format_double(p.improvement.mean) << ',' << format_double(p.improvement.ci95_half)
           << '\n';
    }
    return os.str();
}

std::string round_records_csv_text(const std::vector<RoundRecord>& records) {
    std::ostringstream os;
    os << "schema_version,round,seed,density,mue_count,max_demand,num_femtos,efficiency,"
          "mue_avg_utility,baseline_utility,total_payments,budget_balance,min_agent_utility\n";
    for (const RoundRecord& r : records) {
        os << "1," << r.round << ',' << r.seed << ',' << format_double(r.density) << ','
           << r.mue_count << ',' << format_double(r.max_demand) << ',' << r.num_femtos << ','
           << format_double(r.efficiency) << ',' << format_double(r.mue_avg_utility) << ','
           << format_double(r.baseline_utility) << ',' << format_double(r.total_payments) << ','
           << format_double(r.budget_balance) << ',' << format_double(r.min_agent_utility)
           << '\n';
    }
    return os.str();
}

void emit_truthfulness_csv(const ExperimentConfig& cfg, const std::vector<TruthRecord>& records,
                           const std::string& out_dir) {
    if (records.empty())
        throw InvariantViolation("emit_truthfulness_csv: empty record set");
    const std::filesystem::path dir(out_dir);
    for (const TruthPanel panel : {TruthPanel::single_mue_femto, TruthPanel::multi_mue_femto,
                                   TruthPanel::multi_mue_buyer})
        atomic_write_file(dir / ("truthfulness_" + to_string(panel) + ".csv"),
                          truthfulness_csv_text(records, panel));
    atomic_write_file(dir / "truthfulness_columns.txt",
                      "schema_version: CSV schema revision (1)\n"
                      "panel: manipulated agent and scenario\n"
                      "round: auction round index\n"
                      "factor: bid/ask scaling factor f\n"
                      "delta_utility: u_truthful - u_manipulated\n");
    emit_manifest(cfg, out_dir);
}

void emit_sweep_csv(const ExperimentConfig& cfg, const std::vector<SweepPoint>& points,
                    const std::string& sweep_name, const std::string& out_dir) {
    if (points.empty()) throw InvariantViolation("emit_sweep_csv: empty sweep");
    const std::filesystem::path dir(out_dir);
    atomic_write_file(dir / (sweep_name + ".csv"), sweep_csv_text(points));
    std::vector<RoundRecord> all_rounds;
    for (const SweepPoint& p : points)
        all_rounds.insert(all_rounds.end(), p.rounds.begin(), p.rounds.end());
    atomic_write_file(dir / (sweep_name + "_rounds.csv"), round_records_csv_text(all_rounds));
    atomic_write_file(dir / (sweep_name + "_columns.txt"),
                      "schema_version: CSV schema revision (1)\n"
                      "x: swept parameter value\n"
                      "series: secondary parameter (density, or 0=single-mue 1=multi-mue)\n"
                      "rounds: auction rounds aggregated\n"
                      "mean_utility: mean MUE net utility over the macro baseline\n"
                      "utility_ci95: 95% confidence half-width\n"
                      "mean_baseline: mean macro-only utility U(R_mac)\n"
                      "mean_improvement_pct: mean 100 * utility / baseline\n"
                      "improvement_ci95: 95% confidence half-width\n");
    emit_manifest(cfg, out_dir);
}

void emit_round_records_csv(const std::vector<RoundRecord>& records, const std::string& path) {
    if (records.empty()) throw InvariantViolation("emit_round_records_csv: empty record set");
    atomic_write_file(path, round_records_csv_text(records));
}

void emit_manifest(const ExperimentConfig& cfg, const std::string& out_dir) {
    std::ostringstream os;
    os << "# experiment manifest\n"
       << "schema_version = 1\n"
       << serialize_config(cfg);
    atomic_write_file(std::filesystem::path(out_dir) / "manifest.txt", os.str());
}

}  // namespace fmkt
