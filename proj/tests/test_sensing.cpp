#include <doctest.h>

#include <cmath>

#include "ofdmee/rng.hpp"
#include "ofdmee/sensing.hpp"

using namespace ofdmee;

TEST_CASE("posterior given vacant verdict matches direct arithmetic") {
    // perfect detector never mis-detects
    CHECK(posterior_occupied_given_vacant({0.0, 0.1, 0.5}) == 0.0);
    // sensing that is always wrong: a vacant verdict implies occupancy
    CHECK(posterior_occupied_given_vacant({1.0, 1.0, 0.5}) == doctest::Approx(1.0));
    // 0.03*0.5 / (0.03*0.5 + 0.9*0.5) = 0.015/0.465
    double expected = 0.015 / 0.465;
    CHECK(posterior_occupied_given_vacant({0.03, 0.10, 0.5}) ==
          doctest::Approx(expected).epsilon(1e-14));
    CHECK(expected == doctest::Approx(0.0322580645).epsilon(1e-8));
}

TEST_CASE("posterior given occupied verdict matches direct arithmetic") {
    CHECK(posterior_occupied_given_occupied({0.0, 0.0, 0.5}) == doctest::Approx(1.0));
    // PU always transmits
    CHECK(posterior_occupied_given_occupied({0.3, 0.2, 1.0}) == doctest::Approx(1.0));
    double expected = 0.485 / 0.535;
    CHECK(posterior_occupied_given_occupied({0.03, 0.10, 0.5}) ==
          doctest::Approx(expected).epsilon(1e-14));
    CHECK(expected == doctest::Approx(0.9065420561).epsilon(1e-8));
}

TEST_CASE("degenerate profiles are rejected at construction") {
    // vacant-verdict denominator zero: perfect detector with PU always on
    CHECK_THROWS_AS(SensingProfile(0.0, 0.3, 1.0), DegenerateProfile);
    // occupied-verdict denominator zero: md = 1 with rho = 1
    CHECK_THROWS_AS(SensingProfile(1.0, 0.3, 1.0), DegenerateProfile);
    CHECK_THROWS_AS(SensingProfile(-0.1, 0.3, 0.5), DegenerateProfile);
    CHECK_THROWS_AS(SensingProfile(0.1, 1.3, 0.5), DegenerateProfile);
}

TEST_CASE("sample_profile is deterministic and respects the stated ranges") {
    auto a = sample_profile(1234, 3);
    auto b = sample_profile(1234, 3);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].rho_md == b[i].rho_md);
        CHECK(a[i].rho_fa == b[i].rho_fa);
        CHECK(a[i].rho == b[i].rho);
    }
    for (int seed = 0; seed < 200; ++seed) {
        for (const auto& p : sample_profile(static_cast<std::uint64_t>(seed), 2)) {
            CHECK(p.rho_md >= 0.01);
            CHECK(p.rho_md <= 0.05);
            CHECK(p.rho_fa >= 0.01);
            CHECK(p.rho_fa <= 0.10);
            CHECK(p.rho >= 0.0);
            CHECK(p.rho <= 1.0);
        }
    }
}

TEST_CASE("sample_profile mis-detection mean matches the uniform moments") {
    const int draws = 100000;
    double sum = 0.0;
    for (int s = 0; s < draws; ++s) sum += sample_profile(static_cast<std::uint64_t>(s), 1)[0].rho_md;
    double mean = sum / draws;
    // U[0.01, 0.05]: mean 0.03, sd 0.04/sqrt(12)
    double sigma = 0.04 / std::sqrt(12.0) / std::sqrt(static_cast<double>(draws));
    CHECK(std::abs(mean - 0.03) <= 3.0 * sigma);
}

TEST_CASE("posterior monotonicity and bounds over random profiles") {
    CounterRng rng(99, 0);
    for (int k = 0; k < 1000; ++k) {
        double md = rng.uniform(0.001, 0.999);
        double fa = rng.uniform(0.001, 0.999);
        double rho = rng.uniform(0.001, 0.999);
        SensingProfile p{md, fa, rho};
        double ov = posterior_occupied_given_vacant(p);
        double oo = posterior_occupied_given_occupied(p);
        CHECK(ov >= 0.0);
        CHECK(ov <= 1.0);
        CHECK(oo >= 0.0);
        CHECK(oo <= 1.0);
        // beta_ov non-decreasing, beta_oo non-increasing in rho_md
        SensingProfile q{std::min(md + 0.0005, 1.0), fa, rho};
        CHECK(posterior_occupied_given_vacant(q) >= ov - 1e-15);
        CHECK(posterior_occupied_given_occupied(q) <= oo + 1e-15);
        // beta_ov = 0 iff rho_md * rho = 0
        CHECK((ov == 0.0) == (md * rho == 0.0));
    }
}
