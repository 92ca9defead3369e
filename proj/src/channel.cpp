#include "ofdmee/channel.hpp"

#include <cmath>

#include "ofdmee/rng.hpp"
#include "ofdmee/spectral.hpp"

namespace ofdmee {

double path_loss(const PathLossModel& model, double distance) {
    if (distance < model.reference_distance) {
        throw DistanceBelowReference("path-loss model is far-field only");
    }
    double free_space = model.wavelength / (4.0 * M_PI * model.reference_distance);
    return free_space * free_space *
           std::pow(model.reference_distance / distance, model.exponent);
}

double estimate_mmse(int n_ch, double sigma_h2, double sigma_n2, double gain, double p_pilots) {
    return (n_ch + 1) * sigma_h2 * sigma_n2 / (sigma_n2 + sigma_h2 * gain * p_pilots);
}

std::vector<std::complex<double>> draw_taps(std::uint64_t rng_seed, int n_ch, double sigma_h2) {
    CounterRng rng(rng_seed, stream_purpose::kChannelTaps);
    std::vector<std::complex<double>> taps(static_cast<std::size_t>(n_ch) + 1);
    for (auto& tap : taps) tap = rng.complex_normal(sigma_h2);
    return taps;
}

std::vector<double> pu_interference(std::span<const PuSpectrum> pu_bands, int n, double delta_f,
                                    double ts) {
    std::vector<double> j(static_cast<std::size_t>(n), 0.0);
    for (const auto& band : pu_bands) {
        if (band.power <= 0.0 || band.bandwidth <= 0.0) continue;
        double psd_fraction = delta_f / band.bandwidth;
        for (int i = 0; i < n; ++i) {
            j[static_cast<std::size_t>(i)] +=
                band.power * psd_fraction *
                leakage_factor(band.center_offsets[static_cast<std::size_t>(i)], band.bandwidth, ts);
        }
    }
    return j;
}

ChannelRealization draw_realization(std::uint64_t rng_seed, int n, int n_ch, double sigma_h2,
                                    double mmse, double g, double noise,
                                    std::span<const PuSpectrum> pu_bands, double delta_f,
                                    double ts) {
    auto taps = draw_taps(rng_seed, n_ch, sigma_h2);
    CounterRng err_rng(rng_seed, stream_purpose::kEstimateError);

    ChannelRealization out;
    out.mmse = mmse;
    out.path_loss = g;
    out.noise = noise;
    out.est_gain.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::complex<double> bin{0.0, 0.0};
        for (std::size_t k = 0; k < taps.size(); ++k) {
            double phase = -2.0 * M_PI * static_cast<double>(i) * static_cast<double>(k) / n;
            bin += taps[k] * std::complex<double>{std::cos(phase), std::sin(phase)};
        }
        std::complex<double> estimate = bin;
        if (mmse > 0.0) estimate += err_rng.complex_normal(mmse);
        out.est_gain[static_cast<std::size_t>(i)] = std::norm(estimate);
    }
    out.pu_interference = pu_interference(pu_bands, n, delta_f, ts);
    return out;
}

} // namespace ofdmee
