#include "fmkt/experiments/config.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "fmkt/experiments/io.hpp"

namespace fmkt {

std::string to_string(Scenario s) {
    return s == Scenario::single_mue ? "single-mue" : "multi-mue";
}

Scenario scenario_from_string(const std::string& s) {
    if (s == "single-mue") return Scenario::single_mue;
    if (s == "multi-mue") return Scenario::multi_mue;
    throw ConfigError("unknown scenario '" + s + "' (expected single-mue or multi-mue)");
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

class KeyValueMap {
  public:
    explicit KeyValueMap(const std::string& text) {
        std::istringstream is(text);
        std::string line;
        int line_no = 0;
        while (std::getline(is, line)) {
            ++line_no;
            const std::string stripped = trim(line);
            if (stripped.empty() || stripped[0] == '#') continue;
            const auto eq = stripped.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
            const std::string key = trim(stripped.substr(0, eq));
            if (key.empty())
                throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
            entries_[key] = trim(stripped.substr(eq + 1));
        }
    }

    template <typename T, typename Parser>
    void get(const std::string& key, T& out, Parser parse) {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return;
        try {
            out = parse(it->second);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': cannot parse value '" + it->second +
                              "'");
        }
        consumed_.insert(key);
    }

    void reject_unknown() const {
        for (const auto& [key, value] : entries_)
            if (!consumed_.contains(key))
                throw ConfigError("unknown config key '" + key + "'");
    }

  private:
    std::map<std::string, std::string> entries_;
    std::set<std::string> consumed_;
};

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ConfigError("trailing characters");
    return v;
}

int parse_int(const std::string& s) {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw ConfigError("trailing characters");
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(s, &pos);
    if (pos != s.size()) throw ConfigError("trailing characters");
    return v;
}

bool parse_bool(const std::string& s) {
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false") return false;
    throw ConfigError("expected boolean");
}

template <typename T, typename Parser>
std::vector<T> parse_list(const std::string& s, Parser parse) {
    std::vector<T> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(parse(trim(item)));
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

template <typename T>
std::string join(const std::vector<T>& v) {
    std::ostringstream os;
    os.precision(15);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i];
    }
    return os.str();
}

}  // namespace

void ExperimentConfig::validate() const {
    if (rounds < 1) throw ConfigError("rounds must be >= 1");
    if (truthfulness_rounds < 1) throw ConfigError("truthfulness_rounds must be >= 1");
    if (slots_per_round < 1) throw ConfigError("slots_per_round must be >= 1");
    if (!(mue_demand_mbps > 0.0)) throw ConfigError("mue_demand_mbps must be > 0");
    if (!(satisfaction_factor > 0.0)) throw ConfigError("satisfaction_factor must be > 0");
    if (density_grid.empty() || mue_count_grid.empty() || max_demand_grid.empty() ||
        manipulation_factors.empty() || mue_sweep_density_grid.empty())
        throw ConfigError("sweep grids must be non-empty");
    for (const double d : density_grid)
        if (d < 0.0 || d > 1.0) throw ConfigError("density_grid entries must lie in [0, 1]");
    for (const double d : mue_sweep_density_grid)
        if (d < 0.0 || d > 1.0)
            throw ConfigError("mue_sweep_density_grid entries must lie in [0, 1]");
    for (const int n : mue_count_grid)
        if (n < 1) throw ConfigError("mue_count_grid entries must be >= 1");
    for (const double d : max_demand_grid)
        if (!(d > 0.0)) throw ConfigError("max_demand_grid entries must be > 0");
    if (fixed_density < 0.0 || fixed_density > 1.0)
        throw ConfigError("fixed_density must lie in [0, 1]");
    if (fixed_mue_count < 1) throw ConfigError("fixed_mue_count must be >= 1");
    if (!(fixed_max_demand > 0.0)) throw ConfigError("fixed_max_demand must be > 0");
    if (channel.femto_reuse_factor < 1) throw ConfigError("femto.reuse_factor must be >= 1");
    if (channel.macro_user_count < 1) throw ConfigError("macro.user_count must be >= 1");
    if (!(channel.macro_bandwidth_hz > 0.0) || !(channel.femto_bandwidth_hz > 0.0))
        throw ConfigError("bandwidths must be > 0");
    if (!(channel.shadowing_std_db >= 0.0)) throw ConfigError("shadowing_std_db must be >= 0");
    if (!(channel.rayleigh_sigma > 0.0)) throw ConfigError("rayleigh_sigma must be > 0");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    KeyValueMap kv(text);

    kv.get("scenario", cfg.scenario,
           [](const std::string& s) { return scenario_from_string(s); });
    kv.get("rounds", cfg.rounds, parse_int);
    kv.get("truthfulness_rounds", cfg.truthfulness_rounds, parse_int);
    kv.get("slots_per_round", cfg.slots_per_round, parse_int);
    kv.get("master_seed", cfg.master_seed, parse_u64);
    kv.get("mue_demand_mbps", cfg.mue_demand_mbps, parse_double);
    kv.get("satisfaction_factor", cfg.satisfaction_factor, parse_double);
    kv.get("density_grid", cfg.density_grid,
           [](const std::string& s) { return parse_list<double>(s, parse_double); });
    kv.get("mue_count_grid", cfg.mue_count_grid,
           [](const std::string& s) { return parse_list<int>(s, parse_int); });
    kv.get("mue_sweep_density_grid", cfg.mue_sweep_density_grid,
           [](const std::string& s) { return parse_list<double>(s, parse_double); });
    kv.get("max_demand_grid", cfg.max_demand_grid,
           [](const std::string& s) { return parse_list<double>(s, parse_double); });
    kv.get("manipulation_factors", cfg.manipulation_factors,
           [](const std::string& s) { return parse_list<double>(s, parse_double); });
    kv.get("fixed_density", cfg.fixed_density, parse_double);
    kv.get("fixed_mue_count", cfg.fixed_mue_count, parse_int);
    kv.get("fixed_max_demand", cfg.fixed_max_demand, parse_double);
    kv.get("output_dir", cfg.output_dir, [](const std::string& s) { return s; });

    ChannelParams& ch = cfg.channel;
    kv.get("macro.tx_power_dbm", ch.macro_tx_power_dbm, parse_double);
    kv.get("macro.bandwidth_hz", ch.macro_bandwidth_hz, parse_double);
    kv.get("macro.antenna_gain_db", ch.macro_antenna_gain_db, parse_double);
    kv.get("macro.user_count", ch.macro_user_count, parse_int);
    kv.get("femto.tx_power_dbm", ch.femto_tx_power_dbm, parse_double);
    kv.get("femto.bandwidth_hz", ch.femto_bandwidth_hz, parse_double);
    kv.get("femto.reuse_factor", ch.femto_reuse_factor, parse_int);
    kv.get("channel.noise_density_dbm_hz", ch.noise_density_dbm_hz, parse_double);
    kv.get("channel.ue_noise_figure_db", ch.ue_noise_figure_db, parse_double);
    kv.get("channel.wall_loss_db", ch.wall_loss_db, parse_double);
    kv.get("channel.shadowing_std_db", ch.shadowing_std_db, parse_double);
    kv.get("channel.rayleigh_sigma", ch.rayleigh_sigma, parse_double);
    kv.get("channel.conventional_macro_path_loss", ch.conventional_macro_path_loss, parse_bool);

    kv.reject_unknown();
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw ConfigError("config file not found: " + path);
    try {
        return parse_config_text(read_file(path));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("while reading " + path + ": " + e.what());
    }
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os.precision(15);
    os << "scenario = " << to_string(cfg.scenario) << '\n'
       << "rounds = " << cfg.rounds << '\n'
       << "truthfulness_rounds = " << cfg.truthfulness_rounds << '\n'
       << "slots_per_round = " << cfg.slots_per_round << '\n'
       << "master_seed = " << cfg.master_seed << '\n'
       << "mue_demand_mbps = " << cfg.mue_demand_mbps << '\n'
       << "satisfaction_factor = " << cfg.satisfaction_factor << '\n'
       << "density_grid = " << join(cfg.density_grid) << '\n'
       << "mue_count_grid = " << join(cfg.mue_count_grid) << '\n'
       << "mue_sweep_density_grid = " << join(cfg.mue_sweep_density_grid) << '\n'
       << "max_demand_grid = " << join(cfg.max_demand_grid) << '\n'
       << "manipulation_factors = " << join(cfg.manipulation_factors) << '\n'
       << "fixed_density = " << cfg.fixed_density << '\n'
       << "fixed_mue_count = " << cfg.fixed_mue_count << '\n'
       << "fixed_max_demand = " << cfg.fixed_max_demand << '\n'
       << "output_dir = " << cfg.output_dir << '\n'
       << channel_params_text(cfg.channel);
    return os.str();
}

}  // namespace fmkt
