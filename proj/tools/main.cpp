#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ofdmee/harness.hpp"

namespace {

struct CommonArgs {
    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<std::string> out_path;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "scenario config file (key = value lines)");
    cmd->add_option("--seed", args.seed, "RNG seed override");
    cmd->add_option("--trials", args.trials, "Monte Carlo trial count override");
    cmd->add_option("--out", args.out_path, "output file (default: stdout)");
    cmd->add_flag("--quiet", args.quiet, "suppress progress notes on stderr");
}

ofdmee::ScenarioConfig resolve_config(const CommonArgs& args) {
    ofdmee::ScenarioConfig cfg;
    if (args.config_path) cfg = ofdmee::load_config(*args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    if (args.trials) cfg.trials = *args.trials;
    cfg.validate();
    return cfg;
}

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> grid;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw ofdmee::ConfigError("empty grid entry");
        std::size_t pos = 0;
        grid.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw ofdmee::ConfigError("bad grid entry: " + item);
    }
    return grid;
}

int write_output(const CommonArgs& args, const std::string& payload) {
    if (args.out_path) {
        std::ofstream out(*args.out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot open output file " << *args.out_path << "\n";
            return 1;
        }
        out << payload;
    } else {
        std::cout << payload;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-optimal OFDM cognitive-radio power loading"};
    app.require_subcommand(1);

    CommonArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "solve one realization and emit the record");
    add_common(solve_cmd, solve_args);

    CommonArgs sweep_args;
    std::string sweep_var = "cci_threshold";
    std::string sweep_grid;
    auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sweep over one variable");
    add_common(sweep_cmd, sweep_args);
    sweep_cmd->add_option("--var", sweep_var, "cci_threshold | rate_floor | mmse");
    sweep_cmd->add_option("--grid", sweep_grid, "comma-separated grid (default per variable)");

    CommonArgs cmp_args;
    std::string cmp_grid;
    auto* cmp_cmd = app.add_subcommand(
        "compare-sensing", "aware vs perfect-sensing-assumed arms over the CCI threshold grid");
    add_common(cmp_cmd, cmp_args);
    cmp_cmd->add_option("--grid", cmp_grid, "comma-separated CCI threshold grid");

    CommonArgs val_args;
    int instances = 50;
    auto* val_cmd = app.add_subcommand("validate", "cross-check the solver against the oracle");
    add_common(val_cmd, val_args);
    val_cmd->add_option("--instances", instances, "number of random small instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve_cmd->parsed()) {
            auto cfg = resolve_config(solve_args);
            auto rec = ofdmee::run_solve(cfg);
            std::ostringstream out;
            ofdmee::write_solve_csv(out, rec, cfg.seed);
            return write_output(solve_args, out.str());
        }
        if (sweep_cmd->parsed()) {
            auto cfg = resolve_config(sweep_args);
            auto var = ofdmee::sweep_variable_from_name(sweep_var);
            auto spec = ofdmee::default_sweep(var);
            if (!sweep_grid.empty()) spec.grid = parse_grid(sweep_grid);
            spec.validate();
            if (!sweep_args.quiet) {
                std::cerr << "sweep " << sweep_var << ": " << spec.grid.size() << " points x "
                          << cfg.trials << " trials\n";
            }
            auto rows = ofdmee::run_sweep(cfg, spec);
            std::ostringstream out;
            ofdmee::write_sweep_csv(out, spec, rows);
            return write_output(sweep_args, out.str());
        }
        if (cmp_cmd->parsed()) {
            auto cfg = resolve_config(cmp_args);
            auto spec = ofdmee::default_sweep(ofdmee::SweepVariable::CciThreshold);
            if (!cmp_grid.empty()) spec.grid = parse_grid(cmp_grid);
            spec.validate();
            if (!cmp_args.quiet) {
                std::cerr << "compare-sensing: " << spec.grid.size() << " points x " << cfg.trials
                          << " trials\n";
            }
            auto rows = ofdmee::run_baseline_comparison(cfg, spec);
            std::ostringstream out;
            ofdmee::write_comparison_csv(out, rows);
            return write_output(cmp_args, out.str());
        }
        if (val_cmd->parsed()) {
            auto cfg = resolve_config(val_args);
            auto report = ofdmee::run_validate(cfg, instances);
            int rc = write_output(val_args, report.text());
            if (rc != 0) return rc;
            if (!report.pass) {
                std::cerr << "validation failure: see report\n";
                return 3;
            }
            return 0;
        }
    } catch (const ofdmee::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ofdmee::ValidationFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ofdmee::Error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
