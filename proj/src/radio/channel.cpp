#include "fmkt/radio/channel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fmkt/rng.hpp"

namespace fmkt {

namespace {

constexpr double kMinLinkDistanceM = 1.0;  // path-loss validity floor

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double clamped_distance(const Point& a, const Point& b) {
    return std::max(distance(a, b), kMinLinkDistanceM);
}

// One wall per indoor endpoint whose apartment does not contain the other
// endpoint; same apartment = 0 walls, capped at 2 by construction.
int wall_count(const Topology& topo, const Point& a, const Point& b) {
    const int apt_a = topo.apartment_of(a);
    const int apt_b = topo.apartment_of(b);
    if (apt_a == apt_b) return 0;
    return (apt_a >= 0 ? 1 : 0) + (apt_b >= 0 ? 1 : 0);
}

double noise_mw(const ChannelParams& p, double bandwidth_hz) {
    return dbm_to_mw(p.noise_density_dbm_hz) * bandwidth_hz * db_to_linear(p.ue_noise_figure_db);
}

double shannon_rate_mbps(double bandwidth_hz, double sinr_linear) {
    return bandwidth_hz * std::log2(1.0 + sinr_linear) / 1e6;
}

}  // namespace

double path_loss_macro_db(double distance_m) {
    if (distance_m <= 0.0) throw std::domain_error("path_loss_macro_db: distance must be > 0");
    return 17.39 + 3.76 * std::log10(distance_m);
}

double path_loss_macro_conventional_db(double distance_m) {
    if (distance_m <= 0.0)
        throw std::domain_error("path_loss_macro_conventional_db: distance must be > 0");
    return 128.1 + 37.6 * std::log10(distance_m / 1000.0);
}

double path_loss_femto_db(double distance_m) {
    if (distance_m <= 0.0) throw std::domain_error("path_loss_femto_db: distance must be > 0");
    return 38.46 + 20.0 * std::log10(distance_m) + 0.7 * distance_m;
}

double draw_shadow_db(std::mt19937_64& rng, const ChannelParams& params) {
    std::normal_distribution<double> normal(0.0, params.shadowing_std_db);
    const double draw = normal(rng);  // always consume the stream
    return params.disable_shadowing ? 0.0 : draw;
}

double draw_fade_gain(std::mt19937_64& rng, const ChannelParams& params) {
    const double mean_power = params.rayleigh_sigma * params.rayleigh_sigma;
    std::exponential_distribution<double> expo(1.0 / mean_power);
    const double draw = expo(rng);
    return params.disable_fading ? 1.0 : draw;
}

double received_power_dbm(double tx_power_dbm, double antenna_gain_db, double path_loss_db,
                          int wall_count, double wall_loss_db, double shadow_db,
                          double fade_gain) {
    return tx_power_dbm + antenna_gain_db - path_loss_db - wall_count * wall_loss_db +
           shadow_db + 10.0 * std::log10(fade_gain);
}

ChannelRealization sample_round(const Topology& topo, const ChannelParams& params,
                                std::uint64_t round, std::uint64_t seed) {
    const std::size_t F = topo.num_femtos();
    const std::size_t M = topo.num_mues();
    std::mt19937_64 rng(mix_seed(seed, round, 0x6c696e6bULL));

    ChannelRealization out;
    out.num_femtos = F;
    out.num_mues = M;
    out.femto_to_mue.resize(F * M);
    out.femto_to_own_fue.resize(F);
    out.macro_to_mue.resize(M);

    // Raw received power from every femtocell at every UE. The UE order is
    // all MUEs followed by all FUEs (femtocell-major); the draw order fixes
    // the realization for a given (seed, round).
    const std::size_t num_ues = M + F * kFuesPerFemto;
    std::vector<Point> ue_positions;
    ue_positions.reserve(num_ues);
    for (const Point& p : topo.mue_positions) ue_positions.push_back(p);
    for (const auto& fues : topo.fue_positions)
        for (const Point& p : fues) ue_positions.push_back(p);

    std::vector<LinkSample> raw(F * num_ues);
    std::vector<double> rx_mw(F * num_ues, 0.0);
    const double wall_db = params.disable_wall_loss ? 0.0 : params.wall_loss_db;
    for (std::size_t f = 0; f < F; ++f) {
        for (std::size_t u = 0; u < num_ues; ++u) {
            LinkSample& link = raw[f * num_ues + u];
            link.distance_m = clamped_distance(topo.femto_positions[f], ue_positions[u]);
            link.path_loss_db = path_loss_femto_db(link.distance_m);
            link.walls = wall_count(topo, topo.femto_positions[f], ue_positions[u]);
            link.shadow_db = draw_shadow_db(rng, params);
            link.fade_gain = draw_fade_gain(rng, params);
            rx_mw[f * num_ues + u] =
                dbm_to_mw(received_power_dbm(params.femto_tx_power_dbm, 0.0, link.path_loss_db,
                                             link.walls, wall_db, link.shadow_db,
                                             link.fade_gain));
        }
    }

    const double femto_link_bw = params.femto_bandwidth_hz / params.femto_reuse_factor;
    const double femto_noise = noise_mw(params, femto_link_bw);
    auto finish_femto_link = [&](std::size_t f, std::size_t u, LinkSample& link) {
        link = raw[f * num_ues + u];
        double interference = 0.0;
        if (!params.disable_interference) {
            for (std::size_t g = 0; g < F; ++g) {
                if (g == f) continue;
                if (static_cast<int>(g % params.femto_reuse_factor) !=
                    static_cast<int>(f % params.femto_reuse_factor))
                    continue;
                interference += rx_mw[g * num_ues + u];
            }
        }
        const double sinr = rx_mw[f * num_ues + u] / (femto_noise + interference);
        link.sinr_db = 10.0 * std::log10(sinr);
        link.rate_mbps = shannon_rate_mbps(femto_link_bw, sinr);
    };

    for (std::size_t f = 0; f < F; ++f) {
        for (std::size_t m = 0; m < M; ++m)
            finish_femto_link(f, m, out.femto_to_mue[f * M + m]);
        for (int k = 0; k < kFuesPerFemto; ++k)
            finish_femto_link(f, M + f * kFuesPerFemto + static_cast<std::size_t>(k),
                              out.femto_to_own_fue[f][static_cast<std::size_t>(k)]);
    }

    const double macro_noise = noise_mw(params, params.macro_bandwidth_hz);
    for (std::size_t m = 0; m < M; ++m) {
        LinkSample& link = out.macro_to_mue[m];
        link.distance_m = clamped_distance(topo.macro_bs, topo.mue_positions[m]);
        link.path_loss_db = params.conventional_macro_path_loss
                                ? path_loss_macro_conventional_db(link.distance_m)
                                : path_loss_macro_db(link.distance_m);
        link.walls = wall_count(topo, topo.macro_bs, topo.mue_positions[m]);
        link.shadow_db = draw_shadow_db(rng, params);
        link.fade_gain = draw_fade_gain(rng, params);
        const double rx = dbm_to_mw(received_power_dbm(
            params.macro_tx_power_dbm, params.macro_antenna_gain_db, link.path_loss_db,
            link.walls, wall_db, link.shadow_db, link.fade_gain));
        const double sinr = rx / macro_noise;
        link.sinr_db = 10.0 * std::log10(sinr);
        // equal time-share among the active macro users
        link.rate_mbps = shannon_rate_mbps(params.macro_bandwidth_hz, sinr) /
                         params.macro_user_count;
    }
    return out;
}

namespace {

void append_link_row(std::ostringstream& os, const std::string& id, const LinkSample& link) {
    os << id << ',' << link.distance_m << ',' << link.path_loss_db << ',' << link.walls << ','
       << link.shadow_db << ',' << link.fade_gain << ',' << link.sinr_db << ','
       << link.rate_mbps << '\n';
}

}  // namespace

std::string realization_csv(const ChannelRealization& r) {
    std::ostringstream os;
    os.precision(12);
    os << "link,distance_m,path_loss_db,walls,shadow_db,fade_gain,sinr_db,rate_mbps\n";
    for (std::size_t f = 0; f < r.num_femtos; ++f)
        for (std::size_t m = 0; m < r.num_mues; ++m)
            append_link_row(os, "femto" + std::to_string(f) + "->mue" + std::to_string(m),
                            r.femto_mue(f, m));
    for (std::size_t f = 0; f < r.num_femtos; ++f)
        for (int k = 0; k < kFuesPerFemto; ++k)
            append_link_row(os,
                            "femto" + std::to_string(f) + "->fue" + std::to_string(k),
                            r.femto_to_own_fue[f][static_cast<std::size_t>(k)]);
    for (std::size_t m = 0; m < r.num_mues; ++m)
        append_link_row(os, "macro->mue" + std::to_string(m), r.macro_to_mue[m]);
    return os.str();
}

std::string channel_params_text(const ChannelParams& p) {
    std::ostringstream os;
    os.precision(12);
    os << "macro.tx_power_dbm = " << p.macro_tx_power_dbm << '\n'
       << "macro.bandwidth_hz = " << p.macro_bandwidth_hz << '\n'
       << "macro.antenna_gain_db = " << p.macro_antenna_gain_db << '\n'
       << "macro.user_count = " << p.macro_user_count << '\n'
       << "femto.tx_power_dbm = " << p.femto_tx_power_dbm << '\n'
       << "femto.bandwidth_hz = " << p.femto_bandwidth_hz << '\n'
       << "femto.reuse_factor = " << p.femto_reuse_factor << '\n'
       << "channel.noise_density_dbm_hz = " << p.noise_density_dbm_hz << '\n'
       << "channel.ue_noise_figure_db = " << p.ue_noise_figure_db << '\n'
       << "channel.wall_loss_db = " << p.wall_loss_db << '\n'
       << "channel.shadowing_std_db = " << p.shadowing_std_db << '\n'
       << "channel.rayleigh_sigma = " << p.rayleigh_sigma << '\n'
       << "channel.conventional_macro_path_loss = "
       << (p.conventional_macro_path_loss ? 1 : 0) << '\n';
    return os.str();
}

}  // namespace fmkt
