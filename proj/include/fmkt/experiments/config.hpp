#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fmkt/radio/channel.hpp"

namespace fmkt {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Scenario { single_mue, multi_mue };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

// Flat key = value experiment configuration. Channel keys mirror the
// system-parameter table (macro.tx_power_dbm, femto.bandwidth_hz, ...).
struct ExperimentConfig {
    Scenario scenario = Scenario::single_mue;
    int rounds = 500;              // per sweep point
    int truthfulness_rounds = 50;  // per manipulation panel
    int slots_per_round = 100;     // T
    std::uint64_t master_seed = 1;

    double mue_demand_mbps = 4.0;      // R_dem of every MUE
    double satisfaction_factor = 1.0;  // a

    // Sweep grids.
    std::vector<double> density_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<int> mue_count_grid = {2, 4, 6, 8, 10, 12, 14, 16};
    std::vector<double> mue_sweep_density_grid = {0.2, 0.5, 1.0};
    std::vector<double> max_demand_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> manipulation_factors = {0.5, 0.8, 1.5, 2.0};

    // Fixed parameters used where a sweep does not vary them.
    double fixed_density = 1.0;
    int fixed_mue_count = 10;
    double fixed_max_demand = 6.0;

    std::string output_dir = "out";

    // Experiments default to the conventional macrocell path-loss model;
    // the table's low-loss constants put the shared macro rate so high that
    // the access-time market rarely clears. Set
    // channel.conventional_macro_path_loss = 0 to use them anyway.
    ChannelParams channel = {.conventional_macro_path_loss = true};

    void validate() const;  // throws ConfigError
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);  // throws ConfigError
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace fmkt
