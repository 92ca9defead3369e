#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ofdmee/harness.hpp"
#include "ofdmee/oracle.hpp"

namespace py = pybind11;
using namespace ofdmee;

PYBIND11_MODULE(ofdmee, m) {
    m.doc() = "Energy-optimal per-subcarrier power loading for an OFDM cognitive-radio "
              "secondary user under imperfect sensing and channel estimation.";

    py::register_exception<Error>(m, "SolverError");

    py::class_<SensingProfile>(m, "SensingProfile")
        .def(py::init<double, double, double>(), py::arg("rho_md"), py::arg("rho_fa"),
             py::arg("rho"))
        .def_readonly("rho_md", &SensingProfile::rho_md)
        .def_readonly("rho_fa", &SensingProfile::rho_fa)
        .def_readonly("rho", &SensingProfile::rho);
    m.def("posterior_occupied_given_vacant", &posterior_occupied_given_vacant);
    m.def("posterior_occupied_given_occupied", &posterior_occupied_given_occupied);
    m.def("sample_profile", &sample_profile, py::arg("seed"), py::arg("band_count"));

    py::class_<PathLossModel>(m, "PathLossModel")
        .def(py::init([](double ref, double exp, double wl) {
                 return PathLossModel{ref, exp, wl};
             }),
             py::arg("reference_distance"), py::arg("exponent"), py::arg("wavelength"))
        .def_readwrite("reference_distance", &PathLossModel::reference_distance)
        .def_readwrite("exponent", &PathLossModel::exponent)
        .def_readwrite("wavelength", &PathLossModel::wavelength);
    m.def("path_loss", &path_loss, py::arg("model"), py::arg("distance"));
    m.def("estimate_mmse", &estimate_mmse, py::arg("n_ch"), py::arg("sigma_h2"),
          py::arg("sigma_n2"), py::arg("gain"), py::arg("p_pilots"));
    m.def("leakage_factor", &leakage_factor, py::arg("f_offset"), py::arg("bandwidth"),
          py::arg("ts"));

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("n", &ScenarioConfig::n)
        .def_readwrite("delta_f", &ScenarioConfig::delta_f)
        .def_readwrite("d_su", &ScenarioConfig::d_su)
        .def_readwrite("d_cci", &ScenarioConfig::d_cci)
        .def_readwrite("d_aci", &ScenarioConfig::d_aci)
        .def_readwrite("n_ch", &ScenarioConfig::n_ch)
        .def_readwrite("sigma_h2", &ScenarioConfig::sigma_h2)
        .def_readwrite("noise", &ScenarioConfig::noise)
        .def_readwrite("pu_psd_power", &ScenarioConfig::pu_psd_power)
        .def_readwrite("p_c", &ScenarioConfig::p_c)
        .def_readwrite("p_th", &ScenarioConfig::p_th)
        .def_readwrite("kappa", &ScenarioConfig::kappa)
        .def_readwrite("delta", &ScenarioConfig::delta)
        .def_readwrite("psi_cci", &ScenarioConfig::psi_cci)
        .def_readwrite("psi_aci", &ScenarioConfig::psi_aci)
        .def_readwrite("p_th_cci", &ScenarioConfig::p_th_cci)
        .def_readwrite("p_th_aci", &ScenarioConfig::p_th_aci)
        .def_readwrite("nu_cci", &ScenarioConfig::nu_cci)
        .def_readwrite("nu_aci", &ScenarioConfig::nu_aci)
        .def_readwrite("r_th", &ScenarioConfig::r_th)
        .def_readwrite("mmse", &ScenarioConfig::mmse)
        .def_readwrite("pilot_power", &ScenarioConfig::pilot_power)
        .def_readwrite("j_const", &ScenarioConfig::j_const)
        .def_readwrite("aci_bandwidth", &ScenarioConfig::aci_bandwidth)
        .def_readwrite("aci_guard", &ScenarioConfig::aci_guard)
        .def_readwrite("trials", &ScenarioConfig::trials)
        .def_readwrite("seed", &ScenarioConfig::seed);
    m.def("load_config", &load_config, py::arg("path"));

    py::class_<SolveRecord>(m, "SolveRecord")
        .def_readonly("ee", &SolveRecord::ee)
        .def_readonly("rate", &SolveRecord::rate)
        .def_readonly("n_q", &SolveRecord::n_q)
        .def_readonly("case_id", &SolveRecord::case_id)
        .def_readonly("feasible", &SolveRecord::feasible)
        .def_readonly("powers", &SolveRecord::powers);
    m.def("run_solve", &run_solve, py::arg("config"));

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("value", &SweepRow::value)
        .def_readonly("mean_ee", &SweepRow::mean_ee)
        .def_readonly("mean_rate", &SweepRow::mean_rate)
        .def_readonly("mean_n_q", &SweepRow::mean_n_q)
        .def_readonly("infeasible_fraction", &SweepRow::infeasible_fraction);
    m.def(
        "run_sweep",
        [](const ScenarioConfig& cfg, const std::string& var,
           std::optional<std::vector<double>> grid) {
            auto spec = default_sweep(sweep_variable_from_name(var));
            if (grid) spec.grid = std::move(*grid);
            spec.validate();
            return run_sweep(cfg, spec);
        },
        py::arg("config"), py::arg("var"), py::arg("grid") = std::nullopt);

    py::class_<ComparisonRow>(m, "ComparisonRow")
        .def_readonly("value", &ComparisonRow::value)
        .def_readonly("interference_aware", &ComparisonRow::interference_aware)
        .def_readonly("interference_naive", &ComparisonRow::interference_naive)
        .def_readonly("ee_aware", &ComparisonRow::ee_aware)
        .def_readonly("ee_naive", &ComparisonRow::ee_naive)
        .def_readonly("rate_aware", &ComparisonRow::rate_aware)
        .def_readonly("rate_naive", &ComparisonRow::rate_naive);
    m.def(
        "run_baseline_comparison",
        [](const ScenarioConfig& cfg, std::optional<std::vector<double>> grid) {
            auto spec = default_sweep(SweepVariable::CciThreshold);
            if (grid) spec.grid = std::move(*grid);
            spec.validate();
            return run_baseline_comparison(cfg, spec);
        },
        py::arg("config"), py::arg("grid") = std::nullopt);

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("pass_", &ValidationReport::pass)
        .def("text", &ValidationReport::text);
    m.def("run_validate", &run_validate, py::arg("config"), py::arg("instance_count"));
}
