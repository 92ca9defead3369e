#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "ofdmee/errors.hpp"

namespace ofdmee {

/// Log-distance path loss anchored to free space at the reference distance.
struct PathLossModel {
    double reference_distance; // m
    double exponent;           // >= 2
    double wavelength;         // m
};

/// Flat-PSD descriptor of an occupied PU band, used for the PU->SU
/// interference floor. center_offsets are spectral distances from each SU
/// subcarrier to the band center (length N).
struct PuSpectrum {
    std::vector<double> center_offsets; // Hz
    double bandwidth;                   // Hz
    double power;                       // W, total in-band power (sigma_PU^2)
};

/// One fading realization of the SU link as the transmitter sees it.
struct ChannelRealization {
    std::vector<double> est_gain;        // |H_hat(W^i)|^2 per subcarrier
    double mmse;                         // sigma_dH^2
    double path_loss;                    // G
    double noise;                        // sigma_n^2, W per subcarrier
    std::vector<double> pu_interference; // J_i, W per subcarrier
};

/// G = (wavelength / (4 pi d_ref))^2 * (d_ref / distance)^exponent.
/// Throws DistanceBelowReference for distance < reference_distance.
double path_loss(const PathLossModel& model, double distance);

/// Closed-form MMSE of the LMMSE channel estimate:
///   (N_ch + 1) sigma_h^2 sigma_n^2 / (sigma_n^2 + sigma_h^2 G P_pilots)
double estimate_mmse(int n_ch, double sigma_h2, double sigma_n2, double gain, double p_pilots);

/// The n_ch+1 zero-mean complex Gaussian taps for a seed (exposed so tests
/// can replay the draw feeding draw_realization).
std::vector<std::complex<double>> draw_taps(std::uint64_t rng_seed, int n_ch, double sigma_h2);

/// Per-subcarrier PU->SU interference floor: each occupied band contributes
/// its flat in-band PSD through the subcarrier sinc^2 window,
///   J_i = sum_l power_l * (delta_f / B_l) * leakage_factor(offset_il, B_l, ts).
std::vector<double> pu_interference(std::span<const PuSpectrum> pu_bands, int n, double delta_f,
                                    double ts);

/// Draws the taps, transforms to n frequency bins (unitary DFT scaled by
/// sqrt(n), i.e. the plain DFT sum over taps), perturbs each bin with an
/// independent CN(0, mmse) error, and returns squared magnitudes plus the
/// interference floor. Deterministic given the seed.
ChannelRealization draw_realization(std::uint64_t rng_seed, int n, int n_ch, double sigma_h2,
                                    double mmse, double g, double noise,
                                    std::span<const PuSpectrum> pu_bands, double delta_f,
                                    double ts);

} // namespace ofdmee
