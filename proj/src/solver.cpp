#include "ofdmee/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace ofdmee {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kFeasTol = 1e-9;     // relative primal feasibility tolerance
constexpr double kPowerClamp = 1e200; // keeps D -> 0 probes finite

void validate_instance(const ProblemInstance& inst) {
    if (!(inst.kappa > 0.0)) throw Error("kappa must be positive");
    if (!(inst.p_c > 0.0)) throw Error("circuitry power must be positive");
    if (!(inst.delta_f > 0.0)) throw Error("subcarrier bandwidth must be positive");
    if (!(inst.channel.noise > 0.0)) throw Error("noise power must be positive");
    if (!(inst.channel.path_loss > 0.0)) throw Error("path loss must be positive");
    if (inst.channel.mmse < 0.0) throw Error("mmse must be non-negative");
    auto n = inst.channel.est_gain.size();
    if (n == 0) throw Error("instance has no subcarriers");
    if (inst.channel.pu_interference.size() != n) throw Error("J vector length mismatch");
    const auto& cs = inst.constraints;
    if (!(cs.total_cap > 0.0)) throw Error("total power cap must be positive");
    if (cs.rate_floor < 0.0) throw Error("rate floor must be non-negative");
    if (cs.leakage.size() != cs.aci_caps.size()) throw Error("leakage/cap band count mismatch");
    for (std::size_t l = 0; l < cs.aci_caps.size(); ++l) {
        if (!(cs.aci_caps[l] > 0.0)) throw Error("ACI cap must be positive");
        if (cs.leakage[l].size() != n) throw Error("leakage vector length mismatch");
    }
}

struct SubcarrierTerms {
    double h2;        // |H_hat|^2
    double c0_over_g; // (sigma_n^2 + J) / G
    double chi_width; // chi * (2 sigma^2 + h2); meaningful only when sigma^2 > 0
    double width;     // 2 sigma^2 + h2
};

double subcarrier_power(const SubcarrierTerms& t, double T, double D, double s2) {
    if (t.h2 <= 0.0) return 0.0;
    double pn;
    if (D > 0.0) {
        pn = T * t.h2 / D - t.c0_over_g;
        if (pn <= 0.0) return 0.0;
        pn = std::min(pn, kPowerClamp);
    } else {
        pn = kPowerClamp;
    }
    if (s2 <= 0.0) return pn / t.h2; // water-filling limit of the closed form
    double srad = 1.0 + 2.0 * pn / t.chi_width;
    return 2.0 * pn / (t.width * (1.0 + std::sqrt(srad)));
}

// Stationarity-point machinery for one instance at fixed q. The max-rate
// surrogate reuses it with kappa = 0, q = 1 (the stationarity system of
// "maximize c subject to the caps").
class InnerSolver {
  public:
    InnerSolver(const ProblemInstance& inst, double q, double kappa, const SolverOptions& opt)
        : inst_(inst), opt_(opt), kappa_(kappa), q_(q), t_scale_(inst.delta_f / kLn2),
          s2_(inst.channel.mmse) {
        double g = inst.channel.path_loss;
        terms_.resize(inst.channel.est_gain.size());
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            double h2 = inst.channel.est_gain[i];
            double c0 = inst.channel.noise + inst.channel.pu_interference[i];
            double width = 2.0 * s2_ + h2;
            double chi_width = 0.0;
            if (s2_ > 0.0 && h2 > 0.0) chi_width = c0 * width * width / (2.0 * s2_ * (s2_ + h2) * g);
            terms_[i] = {h2, c0 / g, chi_width, width};
        }
        powers_.resize(terms_.size());
        tol_rel_ = std::min(opt.multiplier_tol, opt.delta / 16.0);
    }

    Allocation run() {
        const auto& cs = inst_.constraints;
        std::vector<double> l2(cs.aci_caps.size(), 0.0);
        double l1 = 0.0;
        double l3 = 0.0;

        compute(0.0, l2, 0.0);
        if (check_feasibility(inst_, powers_, kFeasTol).ok()) {
            return make_allocation(0.0, l2, 0.0, true);
        }

        // Power-side repair with the rate multiplier clamped at zero.
        enforce_caps(0.0, l1, l2);
        if (rate_ok()) return make_allocation(l1, l2, 0.0, true);

        // Rate floor engaged. Decide feasibility exactly; then repair with
        // lambda1 = 0 (with lambda2 fixed, powers depend on lambda1 and
        // lambda3 only through (q+lambda3)/(kappa+lambda1), so total-power
        // and rate equalities cannot both hold at positive multipliers).
        if (max_rate_under_caps(inst_, opt_) < cs.rate_floor * (1.0 - kFeasTol)) {
            return make_allocation(0.0, l2, 0.0, false);
        }
        std::fill(l2.begin(), l2.end(), 0.0);
        l3 = enforce_rate_and_aci(l2);
        if (total() > cs.total_cap * (1.0 + 64.0 * kFeasTol)) {
            // The feasibility probe passed, so a wide miss here is a
            // malformed instance, not a tolerance artifact.
            throw BisectionStall("rate-floor repair exceeded the total power cap");
        }
        return make_allocation(0.0, l2, l3, true);
    }

    void compute(double l1, std::span<const double> l2, double l3) {
        const auto& leak = inst_.constraints.leakage;
        double t = t_scale_ * (q_ + l3);
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            double d = kappa_ + l1;
            for (std::size_t l = 0; l < l2.size(); ++l) d += l2[l] * leak[l][i];
            powers_[i] = subcarrier_power(terms_[i], t, d, s2_);
        }
    }

    double total() const { return std::accumulate(powers_.begin(), powers_.end(), 0.0); }

    double weighted(std::size_t band) const {
        const auto& w = inst_.constraints.leakage[band];
        double sum = 0.0;
        for (std::size_t i = 0; i < powers_.size(); ++i) sum += powers_[i] * w[i];
        return sum;
    }

    double rate() const { return capacity(inst_, powers_); }

    // lambda1 outermost, per-band lambda2 inner, lambda3 held fixed.
    void enforce_caps(double l3, double& l1, std::vector<double>& l2) {
        const auto& cs = inst_.constraints;
        auto eval = [&](double a, std::vector<double>& b) { compute(a, b, l3); };
        auto excess = [&](double a) {
            solve_aci(a, l2, eval);
            return total() - cs.total_cap;
        };
        l1 = bisect_nonneg(excess, tol_rel_ * cs.total_cap);
    }

    // lambda2 per band outermost (cyclic for several bands), lambda3 rate
    // equality innermost; lambda1 = 0 throughout.
    double enforce_rate_and_aci(std::vector<double>& l2) {
        double l3 = 0.0;
        auto eval = [&](double, std::vector<double>& b) { l3 = solve_rate(b); };
        solve_aci(0.0, l2, eval);
        return l3;
    }

    const std::vector<double>& powers() const { return powers_; }

  private:
    bool rate_ok() const {
        double floor = inst_.constraints.rate_floor;
        return floor <= 0.0 || rate() >= floor * (1.0 - kFeasTol);
    }

    // Smallest x >= 0 with target(x) <= tol_abs for a continuous
    // non-increasing target; leaves the solver state at the returned x.
    double bisect_nonneg(const std::function<double(double)>& target, double tol_abs) {
        if (target(0.0) <= tol_abs) return 0.0;
        double lo = 0.0;
        double hi = 1.0;
        int grow = 0;
        while (target(hi) > 0.0) {
            lo = hi;
            hi *= 4.0;
            if (++grow > opt_.max_bisect) {
                throw BisectionStall("multiplier bracket not found");
            }
        }
        for (int it = 0; it < opt_.max_bisect; ++it) {
            double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            double f = target(mid);
            if (std::abs(f) <= tol_abs) return mid;
            (f > 0.0 ? lo : hi) = mid;
        }
        target(hi); // settle on the feasible endpoint
        return hi;
    }

    template <class Eval>
    void solve_aci(double l1, std::vector<double>& l2, Eval&& eval) {
        const auto& cs = inst_.constraints;
        if (l2.empty()) {
            eval(l1, l2);
            return;
        }
        int sweeps = l2.size() == 1 ? 1 : 32;
        for (int sweep = 0; sweep < sweeps; ++sweep) {
            bool dirty = false;
            for (std::size_t band = 0; band < l2.size(); ++band) {
                double cap = cs.aci_caps[band];
                auto excess = [&](double x) {
                    l2[band] = x;
                    eval(l1, l2);
                    return weighted(band) - cap;
                };
                double before = l2[band];
                l2[band] = bisect_nonneg(excess, tol_rel_ * cap);
                if (std::abs(l2[band] - before) > 1e-12 * std::max(1.0, std::abs(l2[band]))) {
                    dirty = true;
                }
            }
            if (!dirty) break;
        }
    }

    double solve_rate(std::vector<double>& l2) {
        double floor = inst_.constraints.rate_floor;
        auto shortfall = [&](double x) {
            compute(0.0, l2, x);
            return floor - rate();
        };
        return bisect_nonneg(shortfall, tol_rel_ * floor);
    }

    Allocation make_allocation(double l1, std::vector<double> l2, double l3, bool feasible) {
        Allocation a;
        a.powers = feasible ? powers_ : std::vector<double>(powers_.size(), 0.0);
        a.lambda1 = feasible ? l1 : 0.0;
        a.lambda2 = feasible ? std::move(l2) : std::vector<double>(l2.size(), 0.0);
        a.lambda3 = feasible ? l3 : 0.0;
        a.feasible = feasible;
        a.case_id = classify_case(a);
        return a;
    }

    const ProblemInstance& inst_;
    const SolverOptions& opt_;
    double kappa_;
    double q_;
    double t_scale_;
    double s2_;
    double tol_rel_;
    std::vector<SubcarrierTerms> terms_;
    std::vector<double> powers_;
};

// Equal power at the binding caps; feasible whenever the rate floor allows it.
std::vector<double> equal_power_at_caps(const ProblemInstance& inst) {
    const auto& cs = inst.constraints;
    auto n = inst.channel.est_gain.size();
    double level = cs.total_cap / static_cast<double>(n);
    for (std::size_t l = 0; l < cs.aci_caps.size(); ++l) {
        double wsum = std::accumulate(cs.leakage[l].begin(), cs.leakage[l].end(), 0.0);
        if (wsum > 0.0) level = std::min(level, cs.aci_caps[l] / wsum);
    }
    return std::vector<double>(n, level);
}

double default_q_initial(const ProblemInstance& inst, const SolverOptions& opt) {
    auto p_eq = equal_power_at_caps(inst);
    double c = capacity(inst, p_eq);
    double floor = inst.constraints.rate_floor;
    if (c > 0.0 && (floor <= 0.0 || c >= floor)) return energy_efficiency(inst, p_eq);

    // Equal power misses the rate floor; the max-rate point is the fallback
    // feasible reference when one exists.
    InnerSolver surrogate(inst, 1.0, 0.0, opt);
    double l1 = 0.0;
    std::vector<double> l2(inst.constraints.aci_caps.size(), 0.0);
    surrogate.enforce_caps(0.0, l1, l2);
    double c_max = capacity(inst, surrogate.powers());
    if (c_max > 0.0 && c_max >= floor * (1.0 - kFeasTol)) {
        return energy_efficiency(inst, surrogate.powers());
    }
    return 1.0; // instance is infeasible; the first inner solve flags it
}

} // namespace

std::vector<double> closed_form_power(const ProblemInstance& inst, double q, double lambda1,
                                      std::span<const double> lambda2, double lambda3) {
    validate_instance(inst);
    SolverOptions opt;
    InnerSolver s(inst, q, inst.kappa, opt);
    s.compute(lambda1, lambda2, lambda3);
    return s.powers();
}

Allocation solve_inner(const ProblemInstance& inst, double q, const SolverOptions& opt) {
    validate_instance(inst);
    if (!(q >= 0.0)) throw Error("q must be non-negative");
    InnerSolver s(inst, q, inst.kappa, opt);
    return s.run();
}

double max_rate_under_caps(const ProblemInstance& inst, const SolverOptions& opt) {
    validate_instance(inst);
    InnerSolver s(inst, 1.0, 0.0, opt);
    double l1 = 0.0;
    std::vector<double> l2(inst.constraints.aci_caps.size(), 0.0);
    s.enforce_caps(0.0, l1, l2);
    return capacity(inst, s.powers());
}

SolveTrace solve(const ProblemInstance& inst, const SolverOptions& opt) {
    validate_instance(inst);
    if (!(opt.delta > 0.0)) throw Error("delta must be positive");

    SolveTrace trace;
    double q = opt.q_initial ? *opt.q_initial : default_q_initial(inst, opt);

    for (int k = 0; k < opt.max_outer; ++k) {
        Allocation alloc = solve_inner(inst, q, opt);
        ++trace.n_q;
        if (!alloc.feasible) {
            trace.iterates.push_back({q, inst.p_c, alloc.case_id});
            trace.final = std::move(alloc);
            trace.final_ee = std::numeric_limits<double>::infinity();
            trace.final_rate = 0.0;
            return trace;
        }
        double phi = parametric_objective(inst, alloc.powers, q);
        trace.iterates.push_back({q, phi, alloc.case_id});
        double rate = capacity(inst, alloc.powers);
        if (std::abs(phi) <= opt.delta) {
            trace.final_rate = rate;
            trace.final_ee = rate > 0.0 ? energy_efficiency(inst, alloc.powers)
                                        : std::numeric_limits<double>::infinity();
            trace.final = std::move(alloc);
            return trace;
        }
        if (rate <= 0.0) {
            // Only reachable with a user q_initial below the transmission
            // threshold; rescale until transmitting pays.
            q = std::max(2.0 * q, 1.0);
            continue;
        }
        q = energy_efficiency(inst, alloc.powers);
    }
    throw MaxIterations("Dinkelbach loop exceeded max_outer");
}

int classify_case(const Allocation& a) {
    bool power = a.lambda1 > 0.0;
    bool aci = std::any_of(a.lambda2.begin(), a.lambda2.end(), [](double x) { return x > 0.0; });
    bool rate = a.lambda3 > 0.0;
    if (!power && !aci) return rate ? 2 : 1;
    if (power && !aci) return rate ? 4 : 3;
    if (!power && aci) return rate ? 6 : 5;
    return rate ? 8 : 7;
}

double kkt_stationarity_residual(const ProblemInstance& inst, const Allocation& alloc, double q) {
    auto grad = capacity_gradient(inst, alloc.powers);
    const auto& leak = inst.constraints.leakage;
    double worst = 0.0;
    for (std::size_t i = 0; i < alloc.powers.size(); ++i) {
        if (alloc.powers[i] <= 0.0) continue;
        double d = inst.kappa + alloc.lambda1;
        for (std::size_t l = 0; l < alloc.lambda2.size(); ++l) d += alloc.lambda2[l] * leak[l][i];
        double lhs = (q + alloc.lambda3) * grad[i];
        worst = std::max(worst, std::abs(lhs - d) / d);
    }
    return worst;
}

} // namespace ofdmee
