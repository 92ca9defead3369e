#include "ofdmee/sensing.hpp"

#include "ofdmee/rng.hpp"

namespace ofdmee {

namespace {

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

} // namespace

SensingProfile::SensingProfile(double md, double fa, double occupancy)
    : rho_md(md), rho_fa(fa), rho(occupancy) {
    if (!in_unit_interval(md) || !in_unit_interval(fa) || !in_unit_interval(occupancy)) {
        throw DegenerateProfile("sensing probabilities must lie in [0,1]");
    }
    // Both posterior denominators must be strictly positive.
    if (rho_md * rho + (1.0 - rho_fa) * (1.0 - rho) <= 0.0) {
        throw DegenerateProfile("vacant-verdict posterior denominator is zero");
    }
    if ((1.0 - rho_md) * rho + rho_fa * (1.0 - rho) <= 0.0) {
        throw DegenerateProfile("occupied-verdict posterior denominator is zero");
    }
}

double posterior_occupied_given_vacant(const SensingProfile& p) {
    double hit = p.rho_md * p.rho;
    return hit / (hit + (1.0 - p.rho_fa) * (1.0 - p.rho));
}

double posterior_occupied_given_occupied(const SensingProfile& p) {
    double hit = (1.0 - p.rho_md) * p.rho;
    return hit / (hit + p.rho_fa * (1.0 - p.rho));
}

std::vector<SensingProfile> sample_profile(std::uint64_t rng_seed, int band_count) {
    std::vector<SensingProfile> out;
    out.reserve(static_cast<std::size_t>(band_count));
    for (int b = 0; b < band_count; ++b) {
        CounterRng rng(rng_seed, stream_purpose::kSensing * 1024 + static_cast<std::uint64_t>(b));
        double md = rng.uniform(0.01, 0.05);
        double fa = rng.uniform(0.01, 0.10);
        double occ = rng.uniform();
        out.emplace_back(md, fa, occ);
    }
    return out;
}

} // namespace ofdmee
