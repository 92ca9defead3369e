#include "ofdmee/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include "ofdmee/rng.hpp"

namespace ofdmee {

void ScenarioConfig::validate() const {
    if (n < 1) throw ConfigError("n must be >= 1");
    if (!(delta_f > 0.0)) throw ConfigError("delta_f must be positive");
    if (!(ref_distance > 0.0) || !(wavelength > 0.0)) throw ConfigError("bad path-loss model");
    if (exponent < 2.0) throw ConfigError("path-loss exponent must be >= 2");
    if (d_su < ref_distance || d_cci < ref_distance || d_aci < ref_distance) {
        throw ConfigError("distances must be at or beyond the reference distance");
    }
    if (n_ch < 0) throw ConfigError("n_ch must be non-negative");
    if (!(sigma_h2 > 0.0)) throw ConfigError("sigma_h2 must be positive");
    if (!(noise > 0.0)) throw ConfigError("noise must be positive");
    if (pu_psd_power < 0.0) throw ConfigError("pu_psd_power must be non-negative");
    if (!(p_c > 0.0) || !(p_th > 0.0) || !(kappa > 0.0)) throw ConfigError("bad power model");
    if (!(delta > 0.0)) throw ConfigError("delta must be positive");
    if (!(psi_cci > 0.0 && psi_cci < 1.0) || !(psi_aci > 0.0 && psi_aci < 1.0)) {
        throw ConfigError("confidence levels must lie in (0,1)");
    }
    if (!(p_th_cci > 0.0) || !(p_th_aci > 0.0)) throw ConfigError("PU thresholds must be positive");
    if (!(nu_cci > 0.0) || !(nu_aci > 0.0)) throw ConfigError("fading rates must be positive");
    if (r_th < 0.0) throw ConfigError("r_th must be non-negative");
    if (mmse < 0.0) throw ConfigError("mmse must be non-negative");
    if (pilot_power && *pilot_power < 0.0) throw ConfigError("pilot_power must be non-negative");
    if (j_const && *j_const < 0.0) throw ConfigError("j_const must be non-negative");
    if (!(aci_bandwidth > 0.0)) throw ConfigError("aci_bandwidth must be positive");
    if (aci_guard < 0.0) throw ConfigError("aci_guard must be non-negative");
    if (trials < 1) throw ConfigError("trials must be >= 1");
}

namespace {

std::string trim(std::string s) {
    auto issp = [](unsigned char c) { return std::isspace(c); };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
    return s;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw ConfigError("trailing characters");
        return v;
    } catch (const ConfigError&) {
        throw ConfigError("bad numeric value for '" + key + "': " + value);
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': " + value);
    }
}

} // namespace

void set_config_key(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    using Setter = std::function<void(ScenarioConfig&, const std::string&, const std::string&)>;
    auto dbl = [](double ScenarioConfig::* field) {
        return Setter([field](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.*field = parse_double(k, v);
        });
    };
    auto opt_dbl = [](std::optional<double> ScenarioConfig::* field) {
        return Setter([field](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.*field = parse_double(k, v);
        });
    };
    static const std::map<std::string, Setter> setters = {
        {"n", [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.n = static_cast<int>(parse_double(k, v));
         }},
        {"n_ch", [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.n_ch = static_cast<int>(parse_double(k, v));
         }},
        {"trials", [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.trials = static_cast<int>(parse_double(k, v));
         }},
        {"seed", [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             std::uint64_t s = 0;
             auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
             if (ec != std::errc{} || p != v.data() + v.size()) {
                 throw ConfigError("bad seed value: " + v);
             }
             c.seed = s;
         }},
        {"delta_f", dbl(&ScenarioConfig::delta_f)},
        {"d_su", dbl(&ScenarioConfig::d_su)},
        {"d_cci", dbl(&ScenarioConfig::d_cci)},
        {"d_aci", dbl(&ScenarioConfig::d_aci)},
        {"ref_distance", dbl(&ScenarioConfig::ref_distance)},
        {"exponent", dbl(&ScenarioConfig::exponent)},
        {"wavelength", dbl(&ScenarioConfig::wavelength)},
        {"sigma_h2", dbl(&ScenarioConfig::sigma_h2)},
        {"noise", dbl(&ScenarioConfig::noise)},
        {"pu_psd_power", dbl(&ScenarioConfig::pu_psd_power)},
        {"p_c", dbl(&ScenarioConfig::p_c)},
        {"p_th", dbl(&ScenarioConfig::p_th)},
        {"kappa", dbl(&ScenarioConfig::kappa)},
        {"delta", dbl(&ScenarioConfig::delta)},
        {"psi_cci", dbl(&ScenarioConfig::psi_cci)},
        {"psi_aci", dbl(&ScenarioConfig::psi_aci)},
        {"p_th_cci", dbl(&ScenarioConfig::p_th_cci)},
        {"p_th_aci", dbl(&ScenarioConfig::p_th_aci)},
        {"nu_cci", dbl(&ScenarioConfig::nu_cci)},
        {"nu_aci", dbl(&ScenarioConfig::nu_aci)},
        {"r_th", dbl(&ScenarioConfig::r_th)},
        {"mmse", dbl(&ScenarioConfig::mmse)},
        {"pilot_power", opt_dbl(&ScenarioConfig::pilot_power)},
        {"j_const", opt_dbl(&ScenarioConfig::j_const)},
        {"aci_bandwidth", dbl(&ScenarioConfig::aci_bandwidth)},
        {"aci_guard", dbl(&ScenarioConfig::aci_guard)},
    };
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key: " + key);
    it->second(cfg, key, value);
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    ScenarioConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        set_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return CounterRng::mix(seed ^ CounterRng::mix(index + 0x51ed2701a5c5e3d7ULL));
}

Scenario::Scenario(ScenarioConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    ts_ = 1.0 / cfg_.delta_f;
    PathLossModel model{cfg_.ref_distance, cfg_.exponent, cfg_.wavelength};
    g_su_ = path_loss(model, cfg_.d_su);
    g_cci_ = path_loss(model, cfg_.d_cci);
    g_aci_ = path_loss(model, cfg_.d_aci);

    if (cfg_.pilot_power) {
        cfg_.mmse = estimate_mmse(cfg_.n_ch, cfg_.sigma_h2, cfg_.noise, g_su_, *cfg_.pilot_power);
    }

    // Adjacent band center measured from each subcarrier; subcarrier i sits
    // at (i - (N-1)/2) * delta_f relative to the SU band center.
    double su_halfwidth = 0.5 * cfg_.n * cfg_.delta_f;
    double band_center = su_halfwidth + cfg_.aci_guard + 0.5 * cfg_.aci_bandwidth;
    aci_offsets_.resize(static_cast<std::size_t>(cfg_.n));
    for (int i = 0; i < cfg_.n; ++i) {
        double f_i = (i - 0.5 * (cfg_.n - 1)) * cfg_.delta_f;
        aci_offsets_[static_cast<std::size_t>(i)] = band_center - f_i;
    }
    aci_leakage_ = leakage_profile(aci_band(), ts_);

    if (cfg_.j_const) {
        j_floor_.assign(static_cast<std::size_t>(cfg_.n), *cfg_.j_const);
    } else {
        PuSpectrum spectrum{aci_offsets_, cfg_.aci_bandwidth, cfg_.pu_psd_power};
        j_floor_ = pu_interference(std::span{&spectrum, 1}, cfg_.n, cfg_.delta_f, ts_);
    }
}

PuBand Scenario::cci_band(double threshold) const {
    PuBand band;
    band.bandwidth = cfg_.n * cfg_.delta_f; // co-channel with the SU band
    band.threshold = threshold;
    band.confidence = cfg_.psi_cci;
    band.fading_rate = cfg_.nu_cci;
    band.path_loss = g_cci_;
    return band;
}

PuBand Scenario::aci_band() const {
    PuBand band;
    band.center_offsets = aci_offsets_;
    band.bandwidth = cfg_.aci_bandwidth;
    band.threshold = cfg_.p_th_aci;
    band.confidence = cfg_.psi_aci;
    band.fading_rate = cfg_.nu_aci;
    band.path_loss = g_aci_;
    return band;
}

Scenario::Trial Scenario::draw_trial(std::uint64_t trial_index) const {
    auto profiles = sample_profile(derive_seed(cfg_.seed, trial_index * 2 + 1), 2);
    Trial t{profiles[0], profiles[1], posterior_occupied_given_vacant(profiles[0]),
            posterior_occupied_given_occupied(profiles[1]), {}};
    t.channel = draw_realization(derive_seed(cfg_.seed, trial_index * 2), cfg_.n, cfg_.n_ch,
                                 cfg_.sigma_h2, cfg_.mmse, g_su_, cfg_.noise, {}, cfg_.delta_f,
                                 ts_);
    t.channel.pu_interference = j_floor_;
    return t;
}

double Scenario::draw_cci_fading(std::uint64_t trial_index) const {
    CounterRng rng(derive_seed(cfg_.seed, trial_index * 2 + 1), stream_purpose::kFading);
    return rng.exponential(cfg_.nu_cci);
}

ProblemInstance Scenario::make_instance(const Trial& trial, double p_th_cci, double rate_floor,
                                        double mmse, bool assume_perfect_sensing) const {
    double beta_ov = assume_perfect_sensing ? 0.0 : trial.beta_ov;
    double beta_oo = assume_perfect_sensing ? 1.0 : trial.beta_oo;

    PowerConstraintSet cs;
    cs.total_cap = cci_power_cap(beta_ov, cci_band(p_th_cci), cfg_.p_th);
    cs.aci_caps = {aci_power_cap(beta_oo, aci_band())};
    cs.leakage = {aci_leakage_};
    cs.rate_floor = rate_floor;

    ProblemInstance inst{trial.channel, std::move(cs), cfg_.kappa, cfg_.p_c, cfg_.delta_f};
    inst.channel.mmse = mmse;
    return inst;
}

} // namespace ofdmee
