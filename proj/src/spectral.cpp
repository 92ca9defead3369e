#include "ofdmee/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "ofdmee/rng.hpp"

namespace ofdmee {

namespace {

double sinc_sq(double x) {
    if (x == 0.0) return 1.0;
    double px = M_PI * x;
    double s = std::sin(px) / px;
    return s * s;
}

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = sinc_sq(lm);
    double frm = sinc_sq(rm);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// integral of sinc^2 over [a, b] in normalized units, |a|,|b| <= kTailSwitch
double sinc_sq_integral_direct(double a, double b, double tol) {
    if (b <= a) return 0.0;
    // Unit segments keep the oscillation resolved before adaptivity kicks in.
    int segments = std::max(1, static_cast<int>(std::ceil(b - a)));
    double seg_tol = tol / segments;
    double total = 0.0;
    for (int k = 0; k < segments; ++k) {
        double lo = a + (b - a) * k / segments;
        double hi = a + (b - a) * (k + 1) / segments;
        double mid = 0.5 * (lo + hi);
        double flo = sinc_sq(lo), fmid = sinc_sq(mid), fhi = sinc_sq(hi);
        total += adaptive_simpson(lo, hi, flo, fmid, fhi, simpson(lo, hi, flo, fmid, fhi),
                                  seg_tol, 40);
    }
    return total;
}

constexpr double kTailSwitch = 2048.0;

// integral of sinc^2 over [x, inf) for x >= kTailSwitch, from the asymptotic
// expansion of the sine integral; truncation error ~ 1/(pi^2 (2 pi x)^3).
double sinc_sq_tail(double x) {
    double z = 2.0 * M_PI * x;
    return 1.0 / (2.0 * M_PI * M_PI * x) + std::sin(z) / (4.0 * M_PI * M_PI * M_PI * x * x);
}

// integral of sinc^2 over (-inf, x]
double sinc_sq_cdf(double x) {
    if (x >= kTailSwitch) return 1.0 - sinc_sq_tail(x);
    if (x <= -kTailSwitch) return sinc_sq_tail(-x);
    // 0.5 is the mass of (-inf, 0]
    if (x >= 0.0) return 0.5 + sinc_sq_integral_direct(0.0, x, 1e-11);
    return 0.5 - sinc_sq_integral_direct(x, 0.0, 1e-11);
}

} // namespace

void PuBand::validate() const {
    if (!(bandwidth > 0.0)) throw Error("PU bandwidth must be positive");
    if (!(confidence > 0.0 && confidence < 1.0)) throw Error("confidence must lie in (0,1)");
    if (!(threshold > 0.0)) throw Error("interference threshold must be positive");
    if (!(fading_rate > 0.0)) throw Error("fading rate must be positive");
    if (!(path_loss > 0.0)) throw Error("path loss must be positive");
}

double leakage_factor(double f_offset, double bandwidth, double ts) {
    if (bandwidth <= 0.0) return 0.0;
    double lo = ts * (f_offset - 0.5 * bandwidth);
    double hi = ts * (f_offset + 0.5 * bandwidth);
    double value;
    if (hi - lo <= 4096.0 && std::abs(lo) < kTailSwitch && std::abs(hi) < kTailSwitch) {
        value = sinc_sq_integral_direct(lo, hi, 1e-10);
    } else {
        value = sinc_sq_cdf(hi) - sinc_sq_cdf(lo);
    }
    return std::clamp(value, 0.0, 1.0);
}

std::vector<double> leakage_profile(const PuBand& band, double ts) {
    std::vector<double> w(band.center_offsets.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = leakage_factor(band.center_offsets[i], band.bandwidth, ts);
    }
    return w;
}

double cci_power_cap(double beta_ov, const PuBand& band, double hardware_cap) {
    band.validate();
    if (beta_ov <= 0.0) return hardware_cap;
    double statistical = band.fading_rate * band.threshold /
                         (beta_ov * band.path_loss * (-std::log1p(-band.confidence)));
    return std::min(hardware_cap, statistical);
}

double aci_power_cap(double beta_oo, const PuBand& band) {
    band.validate();
    if (beta_oo <= 0.0) {
        throw ZeroPosterior("ACI cap unbounded: occupied verdict with beta_oo = 0");
    }
    return band.fading_rate * band.threshold /
           (beta_oo * band.path_loss * (-std::log1p(-band.confidence)));
}

double empirical_violation_rate(double allocation_total, const PuBand& band, double beta,
                                int draws, std::uint64_t rng_seed) {
    CounterRng rng(rng_seed, stream_purpose::kFading);
    int compliant = 0;
    for (int k = 0; k < draws; ++k) {
        double gain = rng.exponential(band.fading_rate);
        if (beta * gain * band.path_loss * allocation_total <= band.threshold) ++compliant;
    }
    return static_cast<double>(compliant) / static_cast<double>(draws);
}

} // namespace ofdmee
