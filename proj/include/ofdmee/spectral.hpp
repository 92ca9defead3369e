#pragma once

#include <cstdint>
#include <vector>

#include "ofdmee/errors.hpp"

namespace ofdmee {

/// One PU receiver band as seen from the SU transmitter.
///
/// center_offsets holds f_{i,l}, the spectral distance from each SU
/// subcarrier to the band center (length N; may be empty for a co-channel
/// band, which needs no leakage weights). fading_rate is nu, i.e. the inverse
/// mean of the exponential |H_sp|^2 law on the SU->PU link.
struct PuBand {
    std::vector<double> center_offsets; // Hz, per subcarrier
    double bandwidth;                   // Hz
    double threshold;                   // W, interference threshold at the PU
    double confidence;                  // Psi_th in (0,1)
    double fading_rate;                 // nu > 0
    double path_loss;                   // G to the PU receiver

    void validate() const;
};

/// Deterministic power caps assembled from the statistical constraints.
struct PowerConstraintSet {
    double total_cap;                          // W, right side of the generalized total-power constraint
    std::vector<double> aci_caps;              // W, one per PU band
    std::vector<std::vector<double>> leakage;  // per PU band, length N each
    double rate_floor;                         // bits/s
};

/// Fraction of a unit-power sinc^2 subcarrier spectrum falling inside a band
/// of width `bandwidth` centered `f_offset` away:
///   ts * integral over [f_offset - B/2, f_offset + B/2] of sinc^2(ts * f) df
/// Adaptive Simpson to 1e-10 absolute, asymptotic tails for very wide spans,
/// clamped to [0, 1].
double leakage_factor(double f_offset, double bandwidth, double ts);

/// Per-subcarrier leakage weights for a band (uses band.center_offsets).
std::vector<double> leakage_profile(const PuBand& band, double ts);

/// Generalized total transmit power cap: min of the hardware cap and the
/// statistical CCI cap. beta_ov = 0 means the statistical term is unbounded
/// and the hardware cap binds.
double cci_power_cap(double beta_ov, const PuBand& band, double hardware_cap);

/// Statistical ACI cap on the leakage-weighted power sum. Throws
/// ZeroPosterior when beta_oo = 0 (the cap would be unbounded; the caller
/// must drop the constraint explicitly).
double aci_power_cap(double beta_oo, const PuBand& band);

/// Monte Carlo check of the statistical constraints: draws |H_sp|^2 from
/// Exponential(rate = band.fading_rate) and returns the fraction of draws for
/// which beta * |H_sp|^2 * G * allocation_total stays at or below the band
/// threshold.
double empirical_violation_rate(double allocation_total, const PuBand& band, double beta,
                                int draws, std::uint64_t rng_seed);

} // namespace ofdmee
