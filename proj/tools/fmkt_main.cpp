// femto-market CLI: auction experiment runner and plot-data emitter.
//
// Exit codes: 0 success, 2 configuration error, 3 invariant violation
// during a run.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fmkt/experiments/config.hpp"
#include "fmkt/experiments/io.hpp"
#include "fmkt/experiments/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

struct CommonOptions {
    std::string config_path;
    std::string output_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int rounds = 0;
    bool rounds_set = false;
    bool emit_plot_data = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("-c,--config", opt.config_path, "Experiment config file")->required();
    cmd->add_option("-o,--output-dir", opt.output_dir,
                    "Output directory (default: config output_dir, or $FMKT_OUTPUT_DIR)");
    cmd->add_option("--seed", opt.seed, "Master seed override")
        ->each([&](const std::string&) { opt.seed_set = true; });
    cmd->add_option("--rounds", opt.rounds, "Rounds-per-point override")
        ->each([&](const std::string&) { opt.rounds_set = true; });
    cmd->add_flag("--emit-plot-data", opt.emit_plot_data, "Write plot-ready CSV files");
}

fmkt::ExperimentConfig resolve_config(CommonOptions& opt) {
    fmkt::ExperimentConfig cfg = fmkt::load_config_file(opt.config_path);
    if (opt.seed_set) cfg.master_seed = opt.seed;
    if (opt.rounds_set) {
        cfg.rounds = opt.rounds;
        cfg.truthfulness_rounds = opt.rounds;
    }
    if (opt.output_dir.empty()) {
        if (const char* env = std::getenv("FMKT_OUTPUT_DIR")) opt.output_dir = env;
    }
    if (!opt.output_dir.empty()) cfg.output_dir = opt.output_dir;
    cfg.validate();
    return cfg;
}

void report_sweep(const std::vector<fmkt::SweepPoint>& points, const std::string& name) {
    std::cout << name << ": " << points.size() << " sweep points\n";
    for (const fmkt::SweepPoint& p : points)
        std::cout << "  x=" << p.x << " series=" << p.series
                  << " mean_utility=" << p.utility.mean
                  << " improvement%=" << p.improvement.mean << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"femto-market: VCG access-time auctions for femtocell offloading"};
    app.require_subcommand(1);

    CommonOptions opt;

    CLI::App* validate = app.add_subcommand("validate-config", "Parse and echo a config file");
    validate->add_option("-c,--config", opt.config_path, "Experiment config file")->required();

    CLI::App* single = app.add_subcommand("single-mue", "Density sweep (reverse auction)");
    add_common(single, opt);
    CLI::App* multi = app.add_subcommand("multi-mue", "MUE-count sweep (double auction)");
    add_common(multi, opt);
    CLI::App* truth = app.add_subcommand("truthfulness", "Bid-manipulation experiment");
    add_common(truth, opt);
    CLI::App* sweep = app.add_subcommand("sweep", "Named parameter sweep");
    std::string sweep_kind = "density";
    sweep->add_option("--kind", sweep_kind, "density | mue-count | demand")
        ->check(CLI::IsMember({"density", "mue-count", "demand"}));
    add_common(sweep, opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            const fmkt::ExperimentConfig cfg = fmkt::load_config_file(opt.config_path);
            std::cout << fmkt::serialize_config(cfg);
            return 0;
        }

        fmkt::ExperimentConfig cfg = resolve_config(opt);

        if (truth->parsed()) {
            const std::vector<fmkt::TruthRecord> records = fmkt::run_truthfulness(cfg);
            double min_delta = 0.0;
            for (const fmkt::TruthRecord& r : records)
                min_delta = std::min(min_delta, r.delta_utility);
            std::cout << "truthfulness: " << records.size()
                      << " manipulations, min delta-utility = " << min_delta << '\n';
            fmkt::emit_truthfulness_csv(cfg, records, cfg.output_dir);
            std::cout << "wrote " << cfg.output_dir << "/truthfulness_*.csv\n";
            return 0;
        }

        std::string kind;
        if (single->parsed()) kind = "density";
        else if (multi->parsed()) kind = "mue-count";
        else kind = sweep_kind;

        std::vector<fmkt::SweepPoint> points;
        if (kind == "density") points = fmkt::run_density_sweep(cfg);
        else if (kind == "mue-count") points = fmkt::run_mue_count_sweep(cfg);
        else points = fmkt::run_demand_sweep(cfg);

        report_sweep(points, kind);
        if (opt.emit_plot_data || single->parsed() || multi->parsed() || sweep->parsed()) {
            fmkt::emit_sweep_csv(cfg, points, kind + "_sweep", cfg.output_dir);
            std::cout << "wrote " << cfg.output_dir << "/" << kind << "_sweep.csv\n";
        }
        return 0;
    } catch (const fmkt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const fmkt::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
