#include "ofdmee/problem.hpp"

#include <cmath>
#include <numeric>

namespace ofdmee {

namespace {

constexpr double kLn2 = 0.6931471805599453;

} // namespace

double capacity(const ProblemInstance& inst, std::span<const double> powers) {
    const auto& ch = inst.channel;
    double sum = 0.0;
    for (int i = 0; i < inst.n(); ++i) {
        auto idx = static_cast<std::size_t>(i);
        double p = powers[idx];
        if (p <= 0.0) continue;
        double floor = ch.noise + ch.pu_interference[idx];
        double sinr = ch.est_gain[idx] * ch.path_loss * p /
                      (ch.mmse * ch.path_loss * p + floor);
        sum += std::log2(1.0 + sinr);
    }
    return inst.delta_f * sum;
}

std::vector<double> capacity_gradient(const ProblemInstance& inst,
                                      std::span<const double> powers) {
    const auto& ch = inst.channel;
    std::vector<double> grad(static_cast<std::size_t>(inst.n()));
    double g = ch.path_loss;
    for (int i = 0; i < inst.n(); ++i) {
        auto idx = static_cast<std::size_t>(i);
        double p = powers[idx];
        double h2 = ch.est_gain[idx];
        double s2 = ch.mmse;
        double c0 = ch.noise + ch.pu_interference[idx];
        double den = s2 * g * g * (s2 + h2) * p * p + g * c0 * (2.0 * s2 + h2) * p + c0 * c0;
        grad[idx] = inst.delta_f / kLn2 * h2 * g * c0 / den;
    }
    return grad;
}

double energy_efficiency(const ProblemInstance& inst, std::span<const double> powers) {
    double rate = capacity(inst, powers);
    if (rate <= 0.0) throw ZeroRate("energy efficiency undefined at zero rate");
    double total = std::accumulate(powers.begin(), powers.end(), 0.0);
    return (inst.kappa * total + inst.p_c) / rate;
}

double parametric_objective(const ProblemInstance& inst, std::span<const double> powers,
                            double q) {
    double total = std::accumulate(powers.begin(), powers.end(), 0.0);
    return inst.kappa * total + inst.p_c - q * capacity(inst, powers);
}

bool FeasibilityReport::ok() const {
    if (total_power == ConstraintState::Violated || rate == ConstraintState::Violated) {
        return false;
    }
    for (auto s : aci) {
        if (s == ConstraintState::Violated) return false;
    }
    return true;
}

namespace {

// "<= bound" style constraint
ConstraintState classify_upper(double value, double bound, double tol) {
    double slack = bound - value;
    double scale = std::max(std::abs(bound), 1e-300);
    if (std::abs(slack) <= tol * scale) return ConstraintState::Active;
    return slack > 0.0 ? ConstraintState::Satisfied : ConstraintState::Violated;
}

} // namespace

FeasibilityReport check_feasibility(const ProblemInstance& inst, std::span<const double> powers,
                                    double tol) {
    const auto& cs = inst.constraints;
    FeasibilityReport rep;
    double total = std::accumulate(powers.begin(), powers.end(), 0.0);
    rep.total_power = classify_upper(total, cs.total_cap, tol);

    rep.aci.reserve(cs.aci_caps.size());
    for (std::size_t l = 0; l < cs.aci_caps.size(); ++l) {
        double weighted = 0.0;
        for (std::size_t i = 0; i < powers.size(); ++i) weighted += powers[i] * cs.leakage[l][i];
        rep.aci.push_back(classify_upper(weighted, cs.aci_caps[l], tol));
    }

    if (cs.rate_floor <= 0.0) {
        rep.rate = ConstraintState::Satisfied;
    } else {
        // ">= floor": mirror of the upper-bound classifier
        double rate = capacity(inst, powers);
        double slack = rate - cs.rate_floor;
        if (std::abs(slack) <= tol * cs.rate_floor) {
            rep.rate = ConstraintState::Active;
        } else {
            rep.rate = slack > 0.0 ? ConstraintState::Satisfied : ConstraintState::Violated;
        }
    }
    return rep;
}

} // namespace ofdmee
