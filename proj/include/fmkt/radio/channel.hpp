#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fmkt/radio/topology.hpp"

namespace fmkt {

// Table-driven system parameters. The disable_* switches turn individual
// channel effects off for link-budget tests; all default to the full model.
struct ChannelParams {
    double macro_tx_power_dbm = 46.0;
    double femto_tx_power_dbm = 0.0;
    double noise_density_dbm_hz = -174.0;
    double macro_bandwidth_hz = 10e6;
    double femto_bandwidth_hz = 5e6;
    int femto_reuse_factor = 6;
    double macro_antenna_gain_db = 7.0;
    double ue_noise_figure_db = 4.0;
    double wall_loss_db = 10.0;
    double shadowing_std_db = 8.0;
    double rayleigh_sigma = 1.0;  // E[|h|^2] = sigma^2
    int macro_user_count = 500;

    bool disable_shadowing = false;
    bool disable_fading = false;
    bool disable_interference = false;
    bool disable_wall_loss = false;

    // Non-paper substitute for the printed macrocell path-loss constants
    // (see path_loss_macro_db); off by default.
    bool conventional_macro_path_loss = false;
};

// L = 17.39 + 3.76 * log10(d). Constants as printed in the evaluation
// table; they yield unusually low loss at urban distances, so a
// conventional 3GPP-style substitute (128.1 + 37.6 log10(d_km)) is
// available behind ChannelParams::conventional_macro_path_loss.
double path_loss_macro_db(double distance_m);
double path_loss_macro_conventional_db(double distance_m);

// L = 38.46 + 20 * log10(d) + 0.7 * d.
double path_loss_femto_db(double distance_m);

// Log-normal shadowing draw in dB (zero when disabled).
double draw_shadow_db(std::mt19937_64& rng, const ChannelParams& params);

// Rayleigh fast-fading power gain |h|^2, unit mean for sigma = 1 (one when
// disabled).
double draw_fade_gain(std::mt19937_64& rng, const ChannelParams& params);

// Received power for one link, dBm.
double received_power_dbm(double tx_power_dbm, double antenna_gain_db, double path_loss_db,
                          int wall_count, double wall_loss_db, double shadow_db,
                          double fade_gain);

struct LinkSample {
    double distance_m = 0.0;
    double path_loss_db = 0.0;
    int walls = 0;
    double shadow_db = 0.0;
    double fade_gain = 1.0;
    double sinr_db = 0.0;
    double rate_mbps = 0.0;
};

// One auction round of sampled links. Rates are full-frame Mb/s; the
// macro rate is already divided by the active macro user count.
struct ChannelRealization {
    std::size_t num_femtos = 0;
    std::size_t num_mues = 0;
    std::vector<LinkSample> femto_to_mue;  // row-major [femto][mue]
    std::vector<std::array<LinkSample, kFuesPerFemto>> femto_to_own_fue;  // per femtocell
    std::vector<LinkSample> macro_to_mue;  // per MUE

    const LinkSample& femto_mue(std::size_t femto, std::size_t mue) const {
        return femto_to_mue[femto * num_mues + mue];
    }
};

// Pure function of (topology, params, round, seed); reuse-6 co-channel
// interference between femtocells assigned sub-channels round-robin by
// index.
ChannelRealization sample_round(const Topology& topo, const ChannelParams& params,
                                std::uint64_t round, std::uint64_t seed);

// CSV dump: link,distance_m,path_loss_db,walls,shadow_db,fade_gain,sinr_db,rate_mbps.
std::string realization_csv(const ChannelRealization& realization);

// Human-readable key = value dump mirroring the system-parameter table.
std::string channel_params_text(const ChannelParams& params);

}  // namespace fmkt
