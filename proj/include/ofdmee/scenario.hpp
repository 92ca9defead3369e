#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ofdmee/channel.hpp"
#include "ofdmee/problem.hpp"
#include "ofdmee/sensing.hpp"
#include "ofdmee/spectral.hpp"

namespace ofdmee {

/// Physical scenario: an OFDM SU coexisting with one co-channel PU (band m,
/// sensed vacant) and one frequency-adjacent PU (band l, sensed occupied).
/// Defaults follow the evaluated setup; every field has a config-file key of
/// the same name.
struct ScenarioConfig {
    int n = 128;                      // subcarriers
    double delta_f = 1.25e6 / 128.0;  // Hz
    double d_su = 1000.0;             // m, SU tx-rx distance
    double d_cci = 1500.0;            // m, to the co-channel (m-th) PU
    double d_aci = 1200.0;            // m, to the adjacent (l-th) PU
    double ref_distance = 100.0;      // m
    double exponent = 4.0;
    double wavelength = 0.33;         // m
    int n_ch = 5;                     // channel order
    double sigma_h2 = 1.0 / 6.0;      // per-tap variance; total tap power 0 dB
    double noise = 4e-16;             // W, sigma_n^2
    double pu_psd_power = 4e-16;      // W, PU in-band power for the J_i floor
    double p_c = 2.0;                 // W
    double p_th = 2.0;                // W, hardware total power cap
    double kappa = 7.8;
    double delta = 1e-8;              // Dinkelbach tolerance
    double psi_cci = 0.9;             // Psi_th^(m)
    double psi_aci = 0.9;             // Psi_th^(l)
    double p_th_cci = 1e-13;          // W, P_th^(m)
    double p_th_aci = 1e-13;          // W, P_th^(l)
    double nu_cci = 1.0;
    double nu_aci = 1.0;
    double r_th = 0.0;                // bits/s
    double mmse = 0.0;                // sigma_dH^2; overridden by pilot_power when set
    std::optional<double> pilot_power; // W; derives mmse through the closed form
    std::optional<double> j_const;    // W; constant J_i override
    double aci_bandwidth = 1.25e6;    // Hz, B_l
    double aci_guard = 0.0;           // Hz, gap between SU band edge and PU band edge
    int trials = 200;
    std::uint64_t seed = 1;

    void validate() const;
};

/// key = value lines, '#' comments, unknown keys rejected.
ScenarioConfig load_config(const std::string& path);

/// Applies one key=value pair (used for file lines and CLI overrides).
void set_config_key(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Derives an independent child seed (per trial, per validation instance).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Precomputed geometry plus per-trial assembly of problem instances.
class Scenario {
  public:
    explicit Scenario(ScenarioConfig cfg);

    struct Trial {
        SensingProfile cci_profile;
        SensingProfile aci_profile;
        double beta_ov;
        double beta_oo;
        ChannelRealization channel;
    };

    /// Channel and sensing draws for one trial; deterministic in (seed, index).
    Trial draw_trial(std::uint64_t trial_index) const;

    /// Assembles the optimization instance for a trial. Overrides support the
    /// sweep variables and the perfect-sensing baseline: the mmse override
    /// reinterprets the same drawn estimate under a different assumed
    /// estimation error (the channel draw itself is not redone).
    ProblemInstance make_instance(const Trial& trial, double p_th_cci, double rate_floor,
                                  double mmse, bool assume_perfect_sensing) const;

    ProblemInstance make_instance(const Trial& trial) const {
        return make_instance(trial, cfg_.p_th_cci, cfg_.r_th, cfg_.mmse, false);
    }

    /// Exponential |H_sp|^2 draw on the m-th PU link for a trial.
    double draw_cci_fading(std::uint64_t trial_index) const;

    PuBand cci_band(double threshold) const;
    PuBand aci_band() const;

    const ScenarioConfig& config() const { return cfg_; }
    double ts() const { return ts_; }
    double su_gain() const { return g_su_; }
    double cci_gain() const { return g_cci_; }

  private:
    ScenarioConfig cfg_;
    double ts_;
    double g_su_;
    double g_cci_;
    double g_aci_;
    std::vector<double> aci_offsets_;
    std::vector<double> aci_leakage_;
    std::vector<double> j_floor_;
};

} // namespace ofdmee
