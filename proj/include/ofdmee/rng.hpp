#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace ofdmee {

/// Counter-based pseudo-random generator (SplitMix64 finalizer over a keyed
/// counter). Streams are addressed explicitly, so a trial can be replayed or
/// run in parallel without coordination: the draw sequence for
/// (seed, trial, purpose) never depends on what other streams consumed.
///
/// Stream-splitting convention used across the library:
///   key = mix(seed) xor mix(trial * PHI + purpose + 1)
/// with the purpose ids listed in stream_purpose.
class CounterRng {
  public:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z += kGolden;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed) ^ mix(stream * kGolden + 1)) {}

    /// Stream for one purpose within one Monte Carlo trial.
    static CounterRng for_trial(std::uint64_t seed, std::uint64_t trial, std::uint64_t purpose) {
        return CounterRng(seed, trial * 64 + purpose);
    }

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGolden); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; deterministic draw order.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform(); // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    /// Zero-mean complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance) {
        double s = std::sqrt(variance * 0.5);
        return {s * normal(), s * normal()};
    }

    /// Exponential with rate nu (mean 1/nu).
    double exponential(double rate) { return -std::log(1.0 - uniform()) / rate; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

namespace stream_purpose {
inline constexpr std::uint64_t kChannelTaps = 0;
inline constexpr std::uint64_t kEstimateError = 1;
inline constexpr std::uint64_t kSensing = 2;
inline constexpr std::uint64_t kFading = 3;
} // namespace stream_purpose

} // namespace ofdmee
