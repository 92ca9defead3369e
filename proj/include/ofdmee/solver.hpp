#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ofdmee/problem.hpp"

namespace ofdmee {

struct SolverOptions {
    double delta = 1e-8;             // Dinkelbach tolerance on |Phi_min|
    std::optional<double> q_initial; // default: EE of a feasible reference point
    double multiplier_tol = 1e-10;   // relative tolerance on each equality target
    int max_outer = 100;             // Dinkelbach iteration guard
    int max_bisect = 200;            // per-multiplier bracket/bisection guard
};

struct SolveIterate {
    double q;       // J/bit
    double phi_min; // Phi at the inner minimizer for this q
    int case_id;
};

struct SolveTrace {
    std::vector<SolveIterate> iterates;
    int n_q = 0;
    Allocation final;
    double final_ee = 0.0;   // J/bit; +inf when infeasible
    double final_rate = 0.0; // bits/s
};

/// Per-subcarrier stationary power for fixed q and multipliers. Evaluates the
/// closed form in a cancellation-free arrangement whose sigma_dH^2 -> 0 limit
/// is exactly the water-filling expression (used directly when mmse = 0).
std::vector<double> closed_form_power(const ProblemInstance& instance, double q, double lambda1,
                                      std::span<const double> lambda2, double lambda3);

/// Minimizes Phi(p, q) subject to the total-power, ACI and rate constraints.
/// Starts from the unconstrained stationary point and repairs the active set
/// with monotone bisections (lambda1 outermost, lambda2 per band, lambda3
/// innermost). Returns a zero allocation flagged infeasible when the rate
/// floor is unreachable under the caps.
Allocation solve_inner(const ProblemInstance& instance, double q,
                       const SolverOptions& options = {});

/// Dinkelbach loop around solve_inner: iterates q <- (kappa sum p + p_c)/c(p)
/// until |Phi_min(q)| <= delta. Throws MaxIterations past options.max_outer.
SolveTrace solve(const ProblemInstance& instance, const SolverOptions& options = {});

/// Maps the pattern of nonzero multipliers (lambda1, any lambda2, lambda3) to
/// the active-set case id 1..8.
int classify_case(const Allocation& allocation);

/// Largest capacity achievable under the instance's power caps (rate-floor
/// feasibility bound).
double max_rate_under_caps(const ProblemInstance& instance, const SolverOptions& options = {});

/// Worst relative stationarity residual over subcarriers with p_i > 0:
/// |(q + lambda3) dc/dp_i - (kappa + lambda1 + sum lambda2 w_i)| / (kappa + ...).
double kkt_stationarity_residual(const ProblemInstance& instance, const Allocation& allocation,
                                 double q);

} // namespace ofdmee
