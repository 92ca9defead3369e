#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ofdmee/scenario.hpp"
#include "ofdmee/solver.hpp"

namespace ofdmee {

enum class SweepVariable { CciThreshold, RateFloor, Mmse };

SweepVariable sweep_variable_from_name(const std::string& name); // throws ConfigError

struct SweepSpec {
    SweepVariable variable;
    std::vector<double> grid; // non-empty, strictly increasing

    void validate() const;
};

/// Default grids for the three sweep axes.
SweepSpec default_sweep(SweepVariable variable);

/// One end-to-end solve of the configured scenario (trial 0 of the seed).
struct SolveRecord {
    double ee;   // J/bit; 0 when infeasible (see docs/columns.md)
    double rate; // bits/s
    int n_q;
    int case_id;
    bool feasible;
    std::vector<double> powers;
};

SolveRecord run_solve(const ScenarioConfig& config);

/// Monte Carlo sweep rows under common random numbers: trial t reuses the
/// same channel and sensing draws at every grid value. Means are taken over
/// feasible trials; mean_n_q over all trials.
struct SweepRow {
    double value;
    double mean_ee;
    double mean_rate;
    double mean_n_q;
    double infeasible_fraction;
};

std::vector<SweepRow> run_sweep(const ScenarioConfig& config, const SweepSpec& sweep);

/// Imperfect-sensing-aware arm vs an arm that assumes perfect sensing
/// (beta_ov = 0, beta_oo = 1) while the environment keeps the sampled truth.
/// Interference is beta_ov_true * |H_sp|^2 * G^(m) * sum p, one exponential
/// fading draw per trial, shared across arms and grid values.
struct ComparisonRow {
    double value;
    double interference_aware; // W, mean over trials
    double interference_naive;
    double ee_aware; // J/bit, mean over feasible trials
    double ee_naive;
    double rate_aware; // bits/s
    double rate_naive;
};

std::vector<ComparisonRow> run_baseline_comparison(const ScenarioConfig& config,
                                                   const SweepSpec& sweep);

/// Cross-check of kkt_solver against reference_oracle on small instances.
struct ValidationRow {
    int id;
    int subcarriers;
    double mmse;
    bool rate_binding;
    double ee_solver;
    double ee_oracle;
    double rel_gap;
    double stationarity_residual;
    double feasibility_residual;
    double comp_slackness;
    bool active_sets_agree;
    bool pass;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    bool pass = true;

    std::string text() const; // byte-stable given the same seed
};

ValidationReport run_validate(const ScenarioConfig& config, int instance_count);

/// Random N-subcarrier instance used by the validation suite (exposed for
/// tests). mmse cycles {0, 0.05, 0.1}; odd ids get a binding rate floor.
ProblemInstance make_validation_instance(const ScenarioConfig& config, int id, int subcarriers);

/// Shortest round-trip decimal formatting (locale-independent).
std::string format_double(double value);

void write_solve_csv(std::ostream& out, const SolveRecord& record, std::uint64_t seed);
void write_sweep_csv(std::ostream& out, const SweepSpec& sweep,
                     const std::vector<SweepRow>& rows);
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

} // namespace ofdmee
