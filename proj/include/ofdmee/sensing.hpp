#pragma once

#include <cstdint>
#include <vector>

#include "ofdmee/errors.hpp"

namespace ofdmee {

/// Per-band spectrum sensing error statistics.
///
/// rho_md: probability of declaring an occupied band vacant (mis-detection)
/// rho_fa: probability of declaring a vacant band occupied (false alarm)
/// rho:    prior probability that the PU transmits on the band
///
/// Construction rejects profiles whose posterior denominators vanish.
struct SensingProfile {
    double rho_md;
    double rho_fa;
    double rho;

    SensingProfile(double md, double fa, double occupancy);
};

/// Posterior probability that a band is truly occupied given a vacant sensing
/// verdict (beta_ov). Zero exactly when rho_md * rho = 0.
double posterior_occupied_given_vacant(const SensingProfile& profile);

/// Posterior probability that a band is truly occupied given an occupied
/// sensing verdict (beta_oo).
double posterior_occupied_given_occupied(const SensingProfile& profile);

/// Draws band_count independent profiles: rho_md ~ U[0.01, 0.05],
/// rho_fa ~ U[0.01, 0.1], rho ~ U[0, 1]. Deterministic given the seed.
std::vector<SensingProfile> sample_profile(std::uint64_t rng_seed, int band_count);

} // namespace ofdmee
