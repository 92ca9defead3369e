#pragma once

#include "ofdmee/problem.hpp"

namespace ofdmee {

/// Slow-but-sure solver output used to certify the main solver.
struct OracleResult {
    std::vector<double> powers;
    double objective = 0.0; // Phi for oracle_inner, eta_EE for oracle_ee
    int iterations = 0;
    bool converged = false;
};

/// Minimizes Phi(p, q) over the cap polyhedron intersected with the rate set
/// by projected gradient (Dykstra projections onto the half-spaces and the
/// orthant) with quadratic penalty continuation on the rate floor. Converged
/// when the projected-gradient displacement per unit step is at most
/// tol * (1 + |Phi|). Throws NotConverged past the iteration cap.
///
/// Deliberately shares only capacity / gradient / Phi evaluation with the
/// main solver; no closed-form routine is reused.
OracleResult oracle_inner(const ProblemInstance& instance, double q, double tol);

/// Minimizes eta_EE by shrinking a bracket on q over [0, q_upper] (q_upper is
/// the EE of a feasible reference point), keeping the sign change of
/// Phi_min(q) evaluated through oracle_inner.
OracleResult oracle_ee(const ProblemInstance& instance, double tol);

/// Rate-maximizing point over the cap polyhedron, by the same projected
/// gradient machinery (used for feasibility cross-checks).
OracleResult oracle_max_rate(const ProblemInstance& instance, double tol);

} // namespace ofdmee
