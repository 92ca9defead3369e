#include "ofdmee/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ofdmee/oracle.hpp"
#include "ofdmee/rng.hpp"

namespace ofdmee {

SweepVariable sweep_variable_from_name(const std::string& name) {
    if (name == "cci_threshold") return SweepVariable::CciThreshold;
    if (name == "rate_floor") return SweepVariable::RateFloor;
    if (name == "mmse") return SweepVariable::Mmse;
    throw ConfigError("unknown sweep variable: " + name +
                      " (expected cci_threshold, rate_floor or mmse)");
}

void SweepSpec::validate() const {
    if (grid.empty()) throw ConfigError("sweep grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw ConfigError("sweep grid must be strictly increasing");
    }
}

SweepSpec default_sweep(SweepVariable variable) {
    switch (variable) {
    case SweepVariable::CciThreshold:
        return {variable, {1e-16, 1e-15, 1e-14, 1e-13, 1e-12, 1e-11, 1e-10}};
    case SweepVariable::RateFloor:
        return {variable, {0.0, 1e5, 2e5, 3e5, 4e5, 5e5, 6e5}};
    case SweepVariable::Mmse:
    default:
        return {variable, {0.0, 0.05, 0.1}};
    }
}

namespace {

template <class E>
[[noreturn]] void rethrow_with_context(const E& e, const std::string& context) {
    throw E(std::string(e.what()) + context);
}

ProblemInstance instance_at(const Scenario& sc, const Scenario::Trial& trial,
                            const SweepSpec& sweep, double value, bool naive) {
    const auto& cfg = sc.config();
    switch (sweep.variable) {
    case SweepVariable::CciThreshold:
        return sc.make_instance(trial, value, cfg.r_th, cfg.mmse, naive);
    case SweepVariable::RateFloor:
        return sc.make_instance(trial, cfg.p_th_cci, value, cfg.mmse, naive);
    case SweepVariable::Mmse:
    default:
        return sc.make_instance(trial, cfg.p_th_cci, cfg.r_th, value, naive);
    }
}

struct Accumulator {
    double ee = 0.0;
    double rate = 0.0;
    double n_q = 0.0;
    int feasible = 0;
    int total = 0;

    void add(const SolveTrace& trace) {
        ++total;
        n_q += trace.n_q;
        if (trace.final.feasible) {
            ++feasible;
            ee += trace.final_ee;
            rate += trace.final_rate;
        }
    }
};

} // namespace

SolveRecord run_solve(const ScenarioConfig& config) {
    config.validate();
    Scenario sc(config);
    SolverOptions opt;
    opt.delta = config.delta;
    try {
        auto trial = sc.draw_trial(0);
        auto trace = solve(sc.make_instance(trial), opt);
        SolveRecord rec;
        rec.feasible = trace.final.feasible;
        rec.ee = rec.feasible ? trace.final_ee : 0.0;
        rec.rate = trace.final_rate;
        rec.n_q = trace.n_q;
        rec.case_id = trace.final.case_id;
        rec.powers = trace.final.powers;
        return rec;
    } catch (const MaxIterations& e) {
        rethrow_with_context(e, " [solve, seed=" + std::to_string(config.seed) + "]");
    } catch (const BisectionStall& e) {
        rethrow_with_context(e, " [solve, seed=" + std::to_string(config.seed) + "]");
    }
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& config, const SweepSpec& sweep) {
    config.validate();
    sweep.validate();
    Scenario sc(config);
    SolverOptions opt;
    opt.delta = config.delta;

    std::vector<Accumulator> acc(sweep.grid.size());
    for (int t = 0; t < config.trials; ++t) {
        auto trial = sc.draw_trial(static_cast<std::uint64_t>(t));
        for (std::size_t g = 0; g < sweep.grid.size(); ++g) {
            auto inst = instance_at(sc, trial, sweep, sweep.grid[g], false);
            try {
                acc[g].add(solve(inst, opt));
            } catch (const MaxIterations& e) {
                rethrow_with_context(e, " [sweep trial=" + std::to_string(t) + "]");
            } catch (const BisectionStall& e) {
                rethrow_with_context(e, " [sweep trial=" + std::to_string(t) + "]");
            }
        }
    }

    std::vector<SweepRow> rows;
    rows.reserve(sweep.grid.size());
    for (std::size_t g = 0; g < sweep.grid.size(); ++g) {
        const auto& a = acc[g];
        SweepRow row;
        row.value = sweep.grid[g];
        row.mean_ee = a.feasible > 0 ? a.ee / a.feasible : 0.0;
        row.mean_rate = a.feasible > 0 ? a.rate / a.feasible : 0.0;
        row.mean_n_q = a.total > 0 ? a.n_q / a.total : 0.0;
        row.infeasible_fraction =
            a.total > 0 ? static_cast<double>(a.total - a.feasible) / a.total : 0.0;
        rows.push_back(row);
    }
    return rows;
}

std::vector<ComparisonRow> run_baseline_comparison(const ScenarioConfig& config,
                                                   const SweepSpec& sweep) {
    config.validate();
    sweep.validate();
    if (sweep.variable != SweepVariable::CciThreshold) {
        throw ConfigError("compare-sensing sweeps the CCI threshold only");
    }
    Scenario sc(config);
    SolverOptions opt;
    opt.delta = config.delta;

    struct Arm {
        Accumulator acc;
        double interference = 0.0;
    };
    std::vector<Arm> aware(sweep.grid.size());
    std::vector<Arm> naive(sweep.grid.size());

    for (int t = 0; t < config.trials; ++t) {
        auto trial = sc.draw_trial(static_cast<std::uint64_t>(t));
        double fading = sc.draw_cci_fading(static_cast<std::uint64_t>(t));
        for (std::size_t g = 0; g < sweep.grid.size(); ++g) {
            for (bool assume_perfect : {false, true}) {
                auto inst = instance_at(sc, trial, sweep, sweep.grid[g], assume_perfect);
                auto trace = solve(inst, opt);
                double total =
                    std::accumulate(trace.final.powers.begin(), trace.final.powers.end(), 0.0);
                Arm& arm = assume_perfect ? naive[g] : aware[g];
                arm.acc.add(trace);
                arm.interference += trial.beta_ov * fading * sc.cci_gain() * total;
            }
        }
    }

    std::vector<ComparisonRow> rows;
    rows.reserve(sweep.grid.size());
    for (std::size_t g = 0; g < sweep.grid.size(); ++g) {
        ComparisonRow row;
        row.value = sweep.grid[g];
        int n = aware[g].acc.total;
        row.interference_aware = n > 0 ? aware[g].interference / n : 0.0;
        row.interference_naive = n > 0 ? naive[g].interference / n : 0.0;
        row.ee_aware = aware[g].acc.feasible > 0 ? aware[g].acc.ee / aware[g].acc.feasible : 0.0;
        row.ee_naive = naive[g].acc.feasible > 0 ? naive[g].acc.ee / naive[g].acc.feasible : 0.0;
        row.rate_aware =
            aware[g].acc.feasible > 0 ? aware[g].acc.rate / aware[g].acc.feasible : 0.0;
        row.rate_naive =
            naive[g].acc.feasible > 0 ? naive[g].acc.rate / naive[g].acc.feasible : 0.0;
        rows.push_back(row);
    }
    return rows;
}

ProblemInstance make_validation_instance(const ScenarioConfig& config, int id, int subcarriers) {
    CounterRng rng(derive_seed(config.seed, 0xA11DA7EULL + static_cast<std::uint64_t>(id)), 7);
    double mmse = (id % 3 == 0) ? 0.0 : (id % 3 == 1 ? 0.05 : 0.1);

    PathLossModel model{config.ref_distance, config.exponent, config.wavelength};
    double g = path_loss(model, config.d_su);

    ChannelRealization ch;
    ch.mmse = mmse;
    ch.path_loss = g;
    ch.noise = config.noise;
    ch.est_gain.resize(static_cast<std::size_t>(subcarriers));
    ch.pu_interference.assign(static_cast<std::size_t>(subcarriers), 0.0);
    for (auto& gain : ch.est_gain) {
        auto h = rng.complex_normal(1.0);
        if (mmse > 0.0) h += rng.complex_normal(mmse);
        gain = std::norm(h);
    }

    std::vector<double> w(static_cast<std::size_t>(subcarriers));
    for (auto& x : w) x = rng.uniform(0.02, 0.5);

    ProblemInstance inst{std::move(ch), {}, config.kappa, config.p_c, config.delta_f};
    inst.constraints.leakage = {w};

    // Scale the caps around the unconstrained optimum so every active set is
    // reachable across the suite.
    inst.constraints.total_cap = 1e4;
    inst.constraints.aci_caps = {1e4};
    inst.constraints.rate_floor = 0.0;
    auto unconstrained = solve(inst, {});
    double total0 =
        std::accumulate(unconstrained.final.powers.begin(), unconstrained.final.powers.end(), 0.0);
    double weighted0 = std::inner_product(unconstrained.final.powers.begin(),
                                          unconstrained.final.powers.end(), w.begin(), 0.0);
    inst.constraints.total_cap = total0 * std::pow(10.0, rng.uniform(-0.5, 0.25));
    inst.constraints.aci_caps[0] = weighted0 * std::pow(10.0, rng.uniform(-0.5, 0.25));

    if (id % 2 == 1) {
        auto capped = solve(inst, {});
        double r_opt = capped.final_rate;
        double r_max = max_rate_under_caps(inst, {});
        if (r_max > r_opt * (1.0 + 1e-6)) {
            inst.constraints.rate_floor = r_opt + rng.uniform(0.15, 0.8) * (r_max - r_opt);
        }
    }
    return inst;
}

namespace {

struct ActivePattern {
    bool total = false;
    std::vector<bool> aci;
    bool rate = false;

    bool operator==(const ActivePattern&) const = default;
};

ActivePattern activity(const ProblemInstance& inst, std::span<const double> powers, double tol) {
    auto rep = check_feasibility(inst, powers, tol);
    ActivePattern pat;
    pat.total = rep.total_power == ConstraintState::Active;
    for (auto s : rep.aci) pat.aci.push_back(s == ConstraintState::Active);
    pat.rate = rep.rate == ConstraintState::Active;
    return pat;
}

double feasibility_residual(const ProblemInstance& inst, std::span<const double> powers) {
    const auto& cs = inst.constraints;
    double total = std::accumulate(powers.begin(), powers.end(), 0.0);
    double worst = (total - cs.total_cap) / cs.total_cap;
    for (std::size_t l = 0; l < cs.aci_caps.size(); ++l) {
        double w = 0.0;
        for (std::size_t i = 0; i < powers.size(); ++i) w += powers[i] * cs.leakage[l][i];
        worst = std::max(worst, (w - cs.aci_caps[l]) / cs.aci_caps[l]);
    }
    if (cs.rate_floor > 0.0) {
        worst = std::max(worst, (cs.rate_floor - capacity(inst, powers)) / cs.rate_floor);
    }
    for (double p : powers) worst = std::max(worst, -p / std::max(cs.total_cap, 1e-300));
    return std::max(worst, 0.0);
}

double complementary_slackness(const ProblemInstance& inst, const Allocation& a) {
    const auto& cs = inst.constraints;
    double total = std::accumulate(a.powers.begin(), a.powers.end(), 0.0);
    double sum = a.lambda1 * std::abs(total - cs.total_cap);
    for (std::size_t l = 0; l < cs.aci_caps.size(); ++l) {
        double w = 0.0;
        for (std::size_t i = 0; i < a.powers.size(); ++i) w += a.powers[i] * cs.leakage[l][i];
        sum += a.lambda2[l] * std::abs(w - cs.aci_caps[l]);
    }
    if (cs.rate_floor > 0.0) {
        sum += a.lambda3 * std::abs(capacity(inst, a.powers) - cs.rate_floor);
    }
    // Normalized by the objective scale so "1e-8 scaled" is meaningful.
    return sum / (inst.kappa * cs.total_cap + inst.p_c);
}

} // namespace

ValidationReport run_validate(const ScenarioConfig& config, int instance_count) {
    config.validate();
    if (instance_count < 1) throw ConfigError("instance_count must be >= 1");
    ValidationReport report;
    for (int id = 0; id < instance_count; ++id) {
        auto inst = make_validation_instance(config, id, 4);
        SolverOptions opt;
        opt.delta = config.delta;
        auto trace = solve(inst, opt);
        auto oracle = oracle_ee(inst, 1e-7);

        ValidationRow row;
        row.id = id;
        row.subcarriers = inst.n();
        row.mmse = inst.channel.mmse;
        row.rate_binding = inst.constraints.rate_floor > 0.0;
        row.ee_solver = trace.final_ee;
        row.ee_oracle = oracle.objective;
        row.rel_gap = std::abs(trace.final_ee - oracle.objective) / oracle.objective;
        row.stationarity_residual = kkt_stationarity_residual(inst, trace.final, trace.final_ee);
        row.feasibility_residual = feasibility_residual(inst, trace.final.powers);
        row.comp_slackness = complementary_slackness(inst, trace.final);
        row.active_sets_agree =
            activity(inst, trace.final.powers, 1e-5) == activity(inst, oracle.powers, 1e-5);
        row.pass = row.rel_gap <= 1e-6 && row.stationarity_residual <= 1e-6 &&
                   row.feasibility_residual <= 1e-9 && row.comp_slackness <= 1e-8 &&
                   row.active_sets_agree;
        report.pass = report.pass && row.pass;
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string ValidationReport::text() const {
    std::ostringstream out;
    out << "id,n,mmse,rate_binding,ee_solver,ee_oracle,rel_gap,stationarity,feasibility,"
           "comp_slackness,active_sets_agree,pass\n";
    for (const auto& r : rows) {
        out << r.id << ',' << r.subcarriers << ',' << format_double(r.mmse) << ','
            << (r.rate_binding ? 1 : 0) << ',' << format_double(r.ee_solver) << ','
            << format_double(r.ee_oracle) << ',' << format_double(r.rel_gap) << ','
            << format_double(r.stationarity_residual) << ','
            << format_double(r.feasibility_residual) << ',' << format_double(r.comp_slackness)
            << ',' << (r.active_sets_agree ? 1 : 0) << ',' << (r.pass ? 1 : 0) << '\n';
    }
    out << (pass ? "PASS" : "FAIL") << " (" << rows.size() << " instances)\n";
    return out.str();
}

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void write_solve_csv(std::ostream& out, const SolveRecord& rec, std::uint64_t seed) {
    out << "seed,ee_j_per_bit,rate_bps,n_q,case_id,feasible";
    for (std::size_t i = 0; i < rec.powers.size(); ++i) out << ",p_" << i;
    out << '\n';
    out << seed << ',' << format_double(rec.ee) << ',' << format_double(rec.rate) << ','
        << rec.n_q << ',' << rec.case_id << ',' << (rec.feasible ? 1 : 0);
    for (double p : rec.powers) out << ',' << format_double(p);
    out << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepSpec&, const std::vector<SweepRow>& rows) {
    out << "sweep_value,mean_ee_j_per_bit,mean_rate_bps,mean_n_q,infeasible_fraction\n";
    for (const auto& r : rows) {
        out << format_double(r.value) << ',' << format_double(r.mean_ee) << ','
            << format_double(r.mean_rate) << ',' << format_double(r.mean_n_q) << ','
            << format_double(r.infeasible_fraction) << '\n';
    }
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    out << "sweep_value,interference_aware_w,interference_naive_w,ee_aware_j_per_bit,"
           "ee_naive_j_per_bit,rate_aware_bps,rate_naive_bps\n";
    for (const auto& r : rows) {
        out << format_double(r.value) << ',' << format_double(r.interference_aware) << ','
            << format_double(r.interference_naive) << ',' << format_double(r.ee_aware) << ','
            << format_double(r.ee_naive) << ',' << format_double(r.rate_aware) << ','
            << format_double(r.rate_naive) << '\n';
    }
}

} // namespace ofdmee
