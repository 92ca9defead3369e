#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>

#include "ofdmee/channel.hpp"

using namespace ofdmee;

namespace {
const PathLossModel kModel{100.0, 4.0, 0.33};
}

TEST_CASE("path loss anchors to free space at the reference distance") {
    double fs = std::pow(0.33 / (4.0 * M_PI * 100.0), 2.0);
    CHECK(path_loss(kModel, 100.0) == doctest::Approx(fs).epsilon(1e-14));
    CHECK(path_loss(kModel, 200.0) == doctest::Approx(fs / 16.0).epsilon(1e-14));
    // frozen: (0.33/(400 pi))^2 * 1e-4
    CHECK(path_loss(kModel, 1000.0) == doctest::Approx(6.896173061656614e-12).epsilon(1e-12));
    CHECK(path_loss(kModel, 1000.0) == doctest::Approx(6.896e-12).epsilon(1e-3));
    CHECK(path_loss(kModel, 500.0) > path_loss(kModel, 501.0));
    CHECK_THROWS_AS(path_loss(kModel, 99.0), DistanceBelowReference);
}

TEST_CASE("estimate MMSE closed form") {
    CHECK(estimate_mmse(5, 0.2, 4e-16, 1e-12, 0.0) == doctest::Approx(6 * 0.2).epsilon(1e-14));
    // G * P_pilots = sigma_n^2 / sigma_h^2 halves the noise-only value
    double sn2 = 4e-16;
    CHECK(estimate_mmse(5, 1.0, sn2, 1.0, sn2) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(estimate_mmse(5, 1.0, sn2, 1.0, 1e12) <= 1e-10);
    // monotone in pilots and in channel order
    double prev = estimate_mmse(5, 1.0, sn2, 1e-12, 0.0);
    for (double p = 1.0; p <= 1e8; p *= 10.0) {
        double v = estimate_mmse(5, 1.0, sn2, 1e-12, p);
        CHECK(v <= prev + 1e-18);
        prev = v;
    }
    CHECK(estimate_mmse(6, 1.0, sn2, 1e-12, 2.0) >= estimate_mmse(5, 1.0, sn2, 1e-12, 2.0));
}

TEST_CASE("channel realization is deterministic and unbiased") {
    const int n = 8;
    auto a = draw_realization(42, n, 5, 1.0 / 6.0, 0.05, 1e-12, 4e-16, {}, 9765.625, 1e-4);
    auto b = draw_realization(42, n, 5, 1.0 / 6.0, 0.05, 1e-12, 4e-16, {}, 9765.625, 1e-4);
    CHECK(a.est_gain == b.est_gain);

    // zero estimation error reproduces the true bin powers from the taps
    auto c = draw_realization(42, n, 5, 1.0 / 6.0, 0.0, 1e-12, 4e-16, {}, 9765.625, 1e-4);
    auto taps = draw_taps(42, 5, 1.0 / 6.0);
    for (int i = 0; i < n; ++i) {
        std::complex<double> bin{0.0, 0.0};
        for (std::size_t k = 0; k < taps.size(); ++k) {
            double ph = -2.0 * M_PI * i * static_cast<double>(k) / n;
            bin += taps[k] * std::polar(1.0, ph);
        }
        CHECK(c.est_gain[static_cast<std::size_t>(i)] ==
              doctest::Approx(std::norm(bin)).epsilon(1e-12));
    }

    // E|H_hat|^2 = (N_ch+1) sigma_h^2 + mmse; per-bin law is exponential-like,
    // so sd of the mean over draws is about the mean / sqrt(draws)
    const int draws = 20000;
    const double mmse = 0.3;
    double sum = 0.0;
    for (int s = 0; s < draws; ++s) {
        auto r = draw_realization(static_cast<std::uint64_t>(s), 1, 5, 1.0 / 6.0, mmse, 1e-12,
                                  4e-16, {}, 9765.625, 1e-4);
        sum += r.est_gain[0];
    }
    double expected = 1.0 + mmse;
    double sigma = expected / std::sqrt(static_cast<double>(draws));
    CHECK(std::abs(sum / draws - expected) <= 3.0 * sigma);
}

TEST_CASE("DFT preserves total power (Parseval with the sqrt(N) scaling)") {
    for (std::uint64_t seed : {1ULL, 9ULL, 77ULL}) {
        const int n = 16;
        auto taps = draw_taps(seed, 5, 0.25);
        auto r = draw_realization(seed, n, 5, 0.25, 0.0, 1e-12, 4e-16, {}, 9765.625, 1e-4);
        double bins = std::accumulate(r.est_gain.begin(), r.est_gain.end(), 0.0);
        double tap_power = 0.0;
        for (auto& t : taps) tap_power += std::norm(t);
        CHECK(bins == doctest::Approx(n * tap_power).epsilon(1e-12));
    }
}

TEST_CASE("PU interference floor") {
    const int n = 8;
    double df = 9765.625;
    double ts = 1.0 / df;
    CHECK(pu_interference({}, n, df, ts) == std::vector<double>(n, 0.0));

    PuSpectrum zero{std::vector<double>(n, 3.0 * df), 4.0 * df, 0.0};
    CHECK(pu_interference(std::span{&zero, 1}, n, df, ts) == std::vector<double>(n, 0.0));

    // spectrally distant band: captured power far below 1% of the PU power
    PuSpectrum far{std::vector<double>(n, 400.0 * df), 4.0 * df, 4e-16};
    auto j = pu_interference(std::span{&far, 1}, n, df, ts);
    for (double x : j) {
        CHECK(x >= 0.0);
        CHECK(x < 4e-16 * 1e-2);
    }

    // adjacent band: every subcarrier picks up something
    std::vector<double> offsets(n);
    for (int i = 0; i < n; ++i) offsets[static_cast<std::size_t>(i)] = (2.0 + i) * df;
    PuSpectrum near{offsets, 4.0 * df, 4e-16};
    auto jn = pu_interference(std::span{&near, 1}, n, df, ts);
    for (std::size_t i = 1; i < jn.size(); ++i) CHECK(jn[i] <= jn[i - 1]); // decays with offset
    CHECK(jn[0] > 0.0);
}
