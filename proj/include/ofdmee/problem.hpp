#pragma once

#include <span>
#include <vector>

#include "ofdmee/channel.hpp"
#include "ofdmee/spectral.hpp"

namespace ofdmee {

/// One fully assembled optimization instance.
struct ProblemInstance {
    ChannelRealization channel;
    PowerConstraintSet constraints;
    double kappa;   // amplifier inefficiency multiplier, > 0
    double p_c;     // circuitry power, W, > 0
    double delta_f; // subcarrier bandwidth, Hz

    int n() const { return static_cast<int>(channel.est_gain.size()); }
};

/// Solver output: powers plus the multipliers that certify them.
struct Allocation {
    std::vector<double> powers;  // W per subcarrier
    double lambda1 = 0.0;        // total power / CCI multiplier
    std::vector<double> lambda2; // ACI multipliers, one per PU band
    double lambda3 = 0.0;        // rate multiplier
    int case_id = 1;             // active-set case, 1..8
    bool feasible = true;
};

/// Capacity of the estimated channel (bits/s):
///   delta_f * sum_i log2(1 + |H_hat_i|^2 G p_i / (sigma_dH^2 G p_i + sigma_n^2 + J_i))
double capacity(const ProblemInstance& instance, std::span<const double> powers);

/// Per-subcarrier derivative of capacity (bits/s per W).
std::vector<double> capacity_gradient(const ProblemInstance& instance,
                                      std::span<const double> powers);

/// Energy per delivered bit, (kappa * sum p + p_c) / c(p). Throws ZeroRate
/// when the capacity vanishes.
double energy_efficiency(const ProblemInstance& instance, std::span<const double> powers);

/// Dinkelbach parametric objective Phi(p, q) = kappa * sum p + p_c - q * c(p).
double parametric_objective(const ProblemInstance& instance, std::span<const double> powers,
                            double q);

enum class ConstraintState { Satisfied, Active, Violated };

struct FeasibilityReport {
    ConstraintState total_power;
    std::vector<ConstraintState> aci;
    ConstraintState rate;

    bool ok() const;
};

/// Classifies each constraint family as satisfied / active (within tol of
/// equality, relative) / violated.
FeasibilityReport check_feasibility(const ProblemInstance& instance,
                                    std::span<const double> powers, double tol = 1e-9);

} // namespace ofdmee
