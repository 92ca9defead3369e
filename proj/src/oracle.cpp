#include "ofdmee/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "ofdmee/errors.hpp"

namespace ofdmee {

namespace {

// Dykstra's alternating projections onto {p >= 0}, {sum p <= Pc} and the ACI
// half-spaces. Exact on the intersection of convex sets.
class PolyhedronProjector {
  public:
    explicit PolyhedronProjector(const ProblemInstance& inst) : inst_(inst) {
        const auto& cs = inst.constraints;
        norms_.reserve(cs.leakage.size());
        for (const auto& w : cs.leakage) {
            norms_.push_back(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
        }
    }

    std::vector<double> operator()(std::vector<double> p) const {
        const auto& cs = inst_.constraints;
        std::size_t sets = 2 + cs.aci_caps.size();
        std::vector<std::vector<double>> corr(sets, std::vector<double>(p.size(), 0.0));
        for (int cycle = 0; cycle < 4000; ++cycle) {
            double moved = 0.0;
            for (std::size_t s = 0; s < sets; ++s) {
                for (std::size_t i = 0; i < p.size(); ++i) p[i] += corr[s][i];
                std::vector<double> before = p;
                project_one(s, p);
                for (std::size_t i = 0; i < p.size(); ++i) {
                    double c = before[i] - p[i];
                    moved = std::max(moved, std::abs(c - corr[s][i]));
                    corr[s][i] = c;
                }
            }
            // corrections converge to fixed offsets; stop once the point and
            // the corrections both settle and the point is feasible
            if (residual(p) <= 1e-14 * scale() && moved <= 1e-13 * scale()) break;
        }
        for (auto& x : p) x = std::max(x, 0.0);
        return p;
    }

  private:
    double scale() const { return std::max(inst_.constraints.total_cap, 1e-30); }

    double residual(const std::vector<double>& p) const {
        const auto& cs = inst_.constraints;
        double total = std::accumulate(p.begin(), p.end(), 0.0);
        double r = total - cs.total_cap;
        for (std::size_t l = 0; l < cs.aci_caps.size(); ++l) {
            double w = std::inner_product(p.begin(), p.end(), cs.leakage[l].begin(), 0.0);
            r = std::max(r, (w - cs.aci_caps[l]) / std::max(cs.aci_caps[l], 1e-30) * scale());
        }
        for (double x : p) r = std::max(r, -x);
        return r;
    }

    void project_one(std::size_t s, std::vector<double>& p) const {
        const auto& cs = inst_.constraints;
        if (s == 0) {
            for (auto& x : p) x = std::max(x, 0.0);
            return;
        }
        if (s == 1) {
            double total = std::accumulate(p.begin(), p.end(), 0.0);
            double over = total - cs.total_cap;
            if (over > 0.0) {
                double shift = over / static_cast<double>(p.size());
                for (auto& x : p) x -= shift;
            }
            return;
        }
        std::size_t l = s - 2;
        const auto& w = cs.leakage[l];
        double dot = std::inner_product(p.begin(), p.end(), w.begin(), 0.0);
        double over = dot - cs.aci_caps[l];
        if (over > 0.0 && norms_[l] > 0.0) {
            double shift = over / norms_[l];
            for (std::size_t i = 0; i < p.size(); ++i) p[i] -= shift * w[i];
        }
    }

    const ProblemInstance& inst_;
    std::vector<double> norms_;
};

struct PgProblem {
    std::function<double(const std::vector<double>&)> value;
    std::function<std::vector<double>(const std::vector<double>&)> gradient;
};

// Accelerated projected gradient (FISTA with gradient-scheme adaptive restart
// and backtracking on the majorization constant). Convergence is declared on
// the prox-gradient norm ||p - proj(p - g/L)|| * L <= tol * (1 + |reference|),
// checked periodically at the non-extrapolated iterate.
struct PgOutcome {
    std::vector<double> point;
    int iterations;
    bool converged;
};

PgOutcome projected_gradient(const PgProblem& prob, const PolyhedronProjector& project,
                             std::vector<double> p, double tol, double ref_scale, int max_iter) {
    double big_l = 1.0;
    std::vector<double> y = p;
    double t = 1.0;

    auto prox_step = [&](const std::vector<double>& at, const std::vector<double>& g, double l) {
        std::vector<double> z = at;
        for (std::size_t i = 0; i < z.size(); ++i) z[i] -= g[i] / l;
        return project(std::move(z));
    };

    int it = 0;
    for (; it < max_iter; ++it) {
        auto g = prob.gradient(y);
        double f_y = prob.value(y);
        std::vector<double> z;
        for (int bt = 0; bt < 300; ++bt) {
            z = prox_step(y, g, big_l);
            double lin = 0.0;
            double quad = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i) {
                double d = z[i] - y[i];
                lin += g[i] * d;
                quad += d * d;
            }
            if (prob.value(z) <= f_y + lin + 0.5 * big_l * quad + 1e-12 * (1.0 + std::abs(f_y))) {
                break;
            }
            big_l *= 2.0;
        }
        // gradient-scheme adaptive restart: momentum pointing uphill. This
        // uses no objective differences, which drown in rounding noise near
        // flat optima.
        double along = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) along += g[i] * (z[i] - p[i]);
        if (along > 0.0 && t > 1.0) {
            y = p;
            t = 1.0;
            continue;
        }
        double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        y = z;
        double mix = (t - 1.0) / t_next;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += mix * (z[i] - p[i]);
        p = z;
        t = t_next;
        big_l = std::max(big_l * 0.97, 1e-12);

        if (it % 25 == 0) {
            auto gp = prob.gradient(p);
            auto zz = prox_step(p, gp, big_l);
            double disp = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                disp += (zz[i] - p[i]) * (zz[i] - p[i]);
            }
            disp = std::sqrt(disp) * big_l;
            double ref = ref_scale == 0.0 ? prob.value(p) : ref_scale;
            if (disp <= tol * (1.0 + std::abs(ref))) return {std::move(p), it + 1, true};
        }
    }
    return {std::move(p), it, false};
}

std::vector<double> equal_power_reference(const ProblemInstance& inst) {
    const auto& cs = inst.constraints;
    auto n = inst.channel.est_gain.size();
    double level = cs.total_cap / static_cast<double>(n);
    for (std::size_t l = 0; l < cs.aci_caps.size(); ++l) {
        double wsum = std::accumulate(cs.leakage[l].begin(), cs.leakage[l].end(), 0.0);
        if (wsum > 0.0) level = std::min(level, cs.aci_caps[l] / wsum);
    }
    return std::vector<double>(n, level);
}

} // namespace

OracleResult oracle_max_rate(const ProblemInstance& inst, double tol) {
    PolyhedronProjector project(inst);
    PgProblem prob{
        [&](const std::vector<double>& p) { return -capacity(inst, p); },
        [&](const std::vector<double>& p) {
            auto g = capacity_gradient(inst, p);
            for (auto& x : g) x = -x;
            return g;
        },
    };
    auto start = equal_power_reference(inst);
    auto out = projected_gradient(prob, project, std::move(start), tol,
                                  capacity(inst, equal_power_reference(inst)), 200000);
    OracleResult res;
    res.objective = capacity(inst, out.point);
    res.powers = std::move(out.point);
    res.iterations = out.iterations;
    res.converged = out.converged;
    return res;
}

OracleResult oracle_inner(const ProblemInstance& inst, double q, double tol) {
    if (!(q >= 0.0)) throw Error("q must be non-negative");
    PolyhedronProjector project(inst);
    double floor = inst.constraints.rate_floor;

    std::vector<double> p(inst.channel.est_gain.size(), 0.0);
    int total_iters = 0;
    bool converged = false;

    // Quadratic penalty on the rate shortfall, in the shifted (augmented
    // Lagrangian) form so mu can stay moderate: the multiplier estimate
    // absorbs the stiffness that a bare mu -> infinity schedule would need.
    auto make_problem = [&](double mu, double lam) {
        return PgProblem{
            [&inst, q, mu, lam, floor](const std::vector<double>& x) {
                double v = parametric_objective(inst, x, q);
                if (mu > 0.0) {
                    double s = std::max(0.0, lam / (2.0 * mu) + floor - capacity(inst, x));
                    v += mu * s * s - lam * lam / (4.0 * mu);
                }
                return v;
            },
            [&inst, q, mu, lam, floor](const std::vector<double>& x) {
                auto g = capacity_gradient(inst, x);
                double m_eff = 0.0;
                if (mu > 0.0) {
                    double s = std::max(0.0, lam / (2.0 * mu) + floor - capacity(inst, x));
                    m_eff = 2.0 * mu * s;
                }
                for (auto& gi : g) gi = inst.kappa - (q + m_eff) * gi;
                return g;
            },
        };
    };

    if (floor <= 0.0) {
        auto out =
            projected_gradient(make_problem(0.0, 0.0), project, std::move(p), tol, 0.0, 400000);
        p = std::move(out.point);
        total_iters = out.iterations;
        converged = out.converged;
    } else {
        // Size mu so the first multiplier increments land on the scale of the
        // true rate multiplier: 2 mu floor ~ (kappa+q)/||grad c||_inf.
        auto g0 = capacity_gradient(inst, p);
        double g_inf = 0.0;
        for (double g : g0) g_inf = std::max(g_inf, g);
        double mu = (inst.kappa + q) / std::max(2.0 * floor * g_inf, 1e-300);
        double lam = 0.0;
        double prev_short = std::numeric_limits<double>::infinity();
        for (int stage = 0; stage < 120; ++stage) {
            auto out =
                projected_gradient(make_problem(mu, lam), project, std::move(p), tol, 0.0, 200000);
            p = std::move(out.point);
            total_iters += out.iterations;
            converged = out.converged;
            double short_ = floor - capacity(inst, p);
            if (short_ <= 1e-10 * floor) break;
            lam = std::max(0.0, lam + 2.0 * mu * short_);
            if (lam > 1e30) break; // floor unreachable (capacity ceiling below it)
            if (short_ > 0.25 * prev_short) mu *= 4.0; // insufficient progress
            prev_short = std::max(short_, 0.0);
        }
        if (capacity(inst, p) < floor * (1.0 - 1e-7)) {
            throw NotConverged("penalty continuation could not reach the rate floor");
        }
    }
    if (!converged) throw NotConverged("projected gradient hit the iteration cap");

    OracleResult res;
    res.objective = parametric_objective(inst, p, q);
    res.powers = std::move(p);
    res.iterations = total_iters;
    res.converged = converged;
    return res;
}

OracleResult oracle_ee(const ProblemInstance& inst, double tol) {
    double floor = inst.constraints.rate_floor;
    auto ref = equal_power_reference(inst);
    if (floor > 0.0 && capacity(inst, ref) < floor) {
        auto rmax = oracle_max_rate(inst, std::max(tol, 1e-9));
        if (capacity(inst, rmax.powers) < floor * (1.0 - 1e-7)) {
            throw NotConverged("rate floor unreachable under the caps");
        }
        ref = std::move(rmax.powers);
    }
    double q_hi = energy_efficiency(inst, ref);

    double lo = 0.0;
    double hi = q_hi;
    OracleResult at_hi; // most recent evaluation on the Phi_min <= 0 side
    at_hi.powers = ref;
    int total_iters = 0;
    for (int it = 0; it < 200; ++it) {
        if (hi - lo <= 1e-9 * std::max(hi, 1e-300)) break;
        double mid = 0.5 * (lo + hi);
        auto r = oracle_inner(inst, mid, tol);
        total_iters += r.iterations;
        double phi = r.objective;
        if (phi > 0.0) {
            lo = mid;
        } else {
            hi = mid;
            at_hi = std::move(r);
        }
    }
    OracleResult res;
    res.objective = energy_efficiency(inst, at_hi.powers);
    res.powers = std::move(at_hi.powers);
    res.iterations = total_iters;
    res.converged = true;
    return res;
}

} // namespace ofdmee
