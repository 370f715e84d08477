#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gyro/asymptotics.hpp"
#include "gyro/io.hpp"
#include "gyro/netlist.hpp"
#include "gyro/spectrum.hpp"
#include "gyro/timedomain.hpp"

namespace py = pybind11;
using namespace gyro;

namespace {

py::object opt(const std::optional<double>& v) {
    if (!v) return py::none();
    return py::float_(*v);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral analysis of gyroscopic-dissipative Lagrangian systems";
    m.attr("__version__") = kVersion;

    py::register_exception<ValidationError>(m, "GyroValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "GyroNumericalError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "GyroIoError", PyExc_OSError);

    py::class_<LagrangianSystem>(m, "LagrangianSystem",
                                 "The quadruple (alpha, eta, theta, r) of an n-dof system")
        .def(py::init([](Eigen::MatrixXd alpha, Eigen::MatrixXd eta, Eigen::MatrixXd theta,
                         Eigen::MatrixXd r) {
                 LagrangianSystem sys{std::move(alpha), std::move(eta), std::move(theta),
                                      std::move(r), false};
                 validate(sys);
                 return sys;
             }),
             py::arg("alpha"), py::arg("eta"), py::arg("theta"), py::arg("r"))
        .def_readonly("alpha", &LagrangianSystem::alpha)
        .def_readonly("eta", &LagrangianSystem::eta)
        .def_readonly("theta", &LagrangianSystem::theta)
        .def_readonly("r", &LagrangianSystem::r)
        .def_readonly("conservative", &LagrangianSystem::conservative)
        .def_property_readonly("n", &LagrangianSystem::dof)
        .def("__repr__", [](const LagrangianSystem& s) {
            return "<LagrangianSystem n=" + std::to_string(s.dof()) + ">";
        });

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("n", &ValidationReport::n)
        .def_readonly("n_r", &ValidationReport::n_r)
        .def_readonly("duality_ok", &ValidationReport::duality_ok)
        .def_readonly("loss_fraction", &ValidationReport::loss_fraction)
        .def_readonly("alpha_min_eig", &ValidationReport::alpha_min_eig)
        .def_readonly("eta_min_eig", &ValidationReport::eta_min_eig)
        .def_readonly("r_min_eig", &ValidationReport::r_min_eig);

    py::enum_<ModeClass>(m, "ModeClass")
        .value("Unclassified", ModeClass::Unclassified)
        .value("HighLoss", ModeClass::HighLoss)
        .value("LowLossLowQ", ModeClass::LowLossLowQ)
        .value("LowLossHighQ", ModeClass::LowLossHighQ);

    py::class_<Mode>(m, "Mode")
        .def_readonly("beta", &Mode::beta)
        .def_readonly("zeta", &Mode::zeta)
        .def_readonly("w", &Mode::w)
        .def_readonly("klass", &Mode::klass)
        .def_property_readonly("frequency", &Mode::frequency)
        .def_property_readonly("damping", &Mode::damping)
        .def_property_readonly("q", &Mode::q)
        .def("__repr__", [](const Mode& mode) {
            return "<Mode zeta=(" + std::to_string(mode.zeta.real()) + ", " +
                   std::to_string(mode.zeta.imag()) + ") " + to_string(mode.klass) + ">";
        });

    py::class_<DichotomyReport>(m, "DichotomyReport")
        .def_readonly("n", &DichotomyReport::n)
        .def_readonly("n_r", &DichotomyReport::n_r)
        .def_readonly("omega_max", &DichotomyReport::omega_max)
        .def_readonly("omega_min", &DichotomyReport::omega_min)
        .def_readonly("b_min", &DichotomyReport::b_min)
        .def_readonly("b_max", &DichotomyReport::b_max)
        .def_readonly("duality_ok", &DichotomyReport::duality_ok)
        .def_readonly("d_gap", &DichotomyReport::d_gap)
        .def_readonly("generic", &DichotomyReport::generic)
        .def_property_readonly("omega_max_dual",
                               [](const DichotomyReport& r) { return opt(r.omega_max_dual); })
        .def_property_readonly("b_min_dual",
                               [](const DichotomyReport& r) { return opt(r.b_min_dual); })
        .def_property_readonly("rho_min", [](const DichotomyReport& r) { return opt(r.rho_min); })
        .def_property_readonly("rho_max", [](const DichotomyReport& r) { return opt(r.rho_max); })
        .def_property_readonly("beta0", [](const DichotomyReport& r) { return opt(r.beta0); })
        .def_property_readonly("beta1", [](const DichotomyReport& r) { return opt(r.beta1); })
        .def_property_readonly("beta2", [](const DichotomyReport& r) { return opt(r.beta2); })
        .def_property_readonly("generic_dual",
                               [](const DichotomyReport& r) -> py::object {
                                   if (!r.generic_dual) return py::none();
                                   return py::bool_(*r.generic_dual);
                               })
        .def("c", &DichotomyReport::c, py::arg("beta"))
        .def("c_inv", &DichotomyReport::c_inv, py::arg("y"))
        .def("split_threshold", &DichotomyReport::split_threshold)
        .def("dual_split_threshold",
             [](const DichotomyReport& r) { return opt(r.dual_split_threshold()); });

    py::class_<LimitingFrequencies>(m, "LimitingFrequencies")
        .def_readonly("omega1_spectrum", &LimitingFrequencies::omega1_spectrum)
        .def_readonly("zero_multiplicity", &LimitingFrequencies::zero_multiplicity)
        .def_readonly("rho_min", &LimitingFrequencies::rho_min)
        .def_readonly("rho_max", &LimitingFrequencies::rho_max);

    py::class_<IdentityReport>(m, "IdentityReport")
        .def_readonly("symmetry", &IdentityReport::symmetry)
        .def_property_readonly("duality",
                               [](const IdentityReport& r) { return opt(r.duality); })
        .def_readonly("disc_excess", &IdentityReport::disc_excess)
        .def_readonly("rayleigh_re", &IdentityReport::rayleigh_re)
        .def_readonly("rayleigh_im", &IdentityReport::rayleigh_im)
        .def("worst", &IdentityReport::worst);

    py::class_<AsymptoticModel>(m, "AsymptoticModel")
        .def_readonly("b_coeffs", &AsymptoticModel::b_coeffs)
        .def_readonly("rho_highloss", &AsymptoticModel::rho_highloss)
        .def_readonly("rho_lowloss", &AsymptoticModel::rho_lowloss)
        .def_readonly("d_coeffs", &AsymptoticModel::d_coeffs)
        .def_readonly("zero_d_branches", &AsymptoticModel::zero_d_branches)
        .def_property_readonly("dual_slopes", [](const AsymptoticModel& mdl) -> py::object {
            if (!mdl.dual_slopes) return py::none();
            return py::cast(*mdl.dual_slopes);
        });

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("beta_grid", &SweepResult::beta_grid)
        .def_readonly("branches", &SweepResult::branches)
        .def_readonly("continuity_score", &SweepResult::continuity_score);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("q", &Trajectory::q)
        .def_readonly("qdot", &Trajectory::qdot)
        .def_readonly("energy", &Trajectory::energy)
        .def_readonly("dissipation", &Trajectory::dissipation);

    py::class_<Netlist>(m, "Netlist").def("__eq__", [](const Netlist& a, const Netlist& b) {
        return a == b;
    });

    m.def("validate", &validate, py::arg("system"));
    m.def("dual", &dual, py::arg("system"));
    m.def("pencil", &pencil, py::arg("system"), py::arg("zeta"), py::arg("beta"));
    m.def("hamiltonian", &hamiltonian, py::arg("system"), py::arg("q"), py::arg("qdot"));
    m.def("rayleigh_power", &rayleigh_power, py::arg("system"), py::arg("qdot"), py::arg("beta"));
    m.def("kernel_reduced_system", &kernel_reduced_system, py::arg("system"));

    m.def("spectrum", &spectrum, py::arg("system"), py::arg("beta"));
    m.def("q_factor", &q_factor, py::arg("zeta"));
    m.def("characteristic_scalars", &characteristic_scalars, py::arg("system"));
    m.def("limiting_frequencies", &limiting_frequencies, py::arg("system"));
    m.def("overdamping_thresholds", &overdamping_thresholds, py::arg("system"));
    m.def(
        "classify",
        [](const LagrangianSystem& sys, double beta, std::vector<Mode> modes) {
            return classify(sys, beta, std::move(modes));
        },
        py::arg("system"), py::arg("beta"), py::arg("modes"));
    m.def("identity_suite", &identity_suite, py::arg("system"), py::arg("beta"));

    m.def("expansion_coefficients", &expansion_coefficients, py::arg("system"));
    m.def("log_grid", &log_grid, py::arg("beta_min"), py::arg("beta_max"), py::arg("points"));
    m.def("sweep", &sweep, py::arg("system"), py::arg("beta_grid"));

    m.def("parse_netlist", [](const std::string& text) { return parse_netlist(text); },
          py::arg("text"));
    m.def("compile_netlist", &compile_netlist, py::arg("netlist"));
    m.def("emit_netlist", &emit_netlist, py::arg("netlist"));

    m.def("integrate", &integrate, py::arg("system"), py::arg("beta"), py::arg("q0"),
          py::arg("qdot0"), py::arg("t_end"), py::arg("tol"), py::arg("sample_dt") = 0.0);
    m.def("energy_balance_residual", &energy_balance_residual, py::arg("trajectory"),
          py::arg("system"), py::arg("beta"));

    m.def("load_system", &load_system, py::arg("path"));
    m.def("save_system", &save_system, py::arg("system"), py::arg("path"),
          py::arg("name") = py::none(), py::arg("description") = py::none());
}
