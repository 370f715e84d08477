#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>

#include "gyro/asymptotics.hpp"
#include "gyro/io.hpp"
#include "gyro/netlist.hpp"
#include "gyro/spectrum.hpp"
#include "gyro/timedomain.hpp"

using nlohmann::json;
using namespace gyro;

namespace {

// GYRO_TOL scales the residual thresholds reported by `analyze`.
double tol_scale() {
    const char* env = std::getenv("GYRO_TOL");
    if (!env) return 1.0;
    try {
        double v = std::stod(env);
        if (v > 0) return v / Tolerances{}.eig;
    } catch (const std::exception&) {
    }
    return 1.0;
}

void emit_report(const json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

json provenance(const std::string& input_path) {
    json j;
    j["version"] = kVersion;
    j["input"] = input_path;
    j["input_hash"] = content_hash(read_text_file(input_path));
    return j;
}

json optional_to_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

json thresholds_to_json(const DichotomyReport& rep) {
    json j;
    j["n"] = rep.n;
    j["n_r"] = rep.n_r;
    j["omega_max"] = rep.omega_max;
    j["omega_min"] = rep.omega_min;
    j["b_min"] = rep.b_min;
    j["b_max"] = rep.b_max;
    j["duality_ok"] = rep.duality_ok;
    j["omega_max_dual"] = optional_to_json(rep.omega_max_dual);
    j["b_min_dual"] = optional_to_json(rep.b_min_dual);
    j["rho_min"] = optional_to_json(rep.rho_min);
    j["rho_max"] = optional_to_json(rep.rho_max);
    j["rho_min_dual"] = optional_to_json(rep.rho_min_dual);
    j["rho_max_dual"] = optional_to_json(rep.rho_max_dual);
    j["d_gap"] = rep.d_gap;
    j["d_gap_dual"] = optional_to_json(rep.d_gap_dual);
    j["generic"] = rep.generic;
    j["generic_dual"] = rep.generic_dual ? json(*rep.generic_dual) : json(nullptr);
    j["beta0"] = optional_to_json(rep.beta0);
    j["beta1"] = optional_to_json(rep.beta1);
    j["beta2"] = optional_to_json(rep.beta2);
    return j;
}

std::string fmt10(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void print_thresholds(const DichotomyReport& rep) {
    auto line = [](const char* name, const std::optional<double>& v, const char* why) {
        std::cout << name << " = " << (v ? fmt10(*v) : std::string("absent (") + why + ")")
                  << "\n";
    };
    std::cout << "omega_max = " << fmt10(rep.omega_max) << "\n";
    std::cout << "omega_min = " << fmt10(rep.omega_min) << "\n";
    std::cout << "b_min = " << fmt10(rep.b_min) << "\n";
    line("b_min_dual", rep.b_min_dual, "eta singular");
    line("rho_min", rep.rho_min, "N_R = N");
    line("beta0", rep.beta0, "nongeneric");
    line("beta1", rep.beta1, rep.duality_ok ? "nongeneric dual" : "eta singular");
    line("beta2", rep.beta2, rep.n_r == rep.n ? "N_R = N" : "eta singular");
    std::cout << "generic = " << (rep.generic ? "true" : "false") << "\n";
}

json mode_to_json(const Mode& m) {
    json j;
    j["re_zeta"] = m.zeta.real();
    j["im_zeta"] = m.zeta.imag();
    j["frequency"] = m.frequency();
    j["damping"] = m.damping();
    double q = m.q();
    j["q_factor"] = std::isinf(q) ? json("inf") : json(q);
    j["class"] = to_string(m.klass);
    return j;
}

Eigen::VectorXcd parse_state(const std::string& text, Eigen::Index n, const char* what) {
    if (text.empty()) return Eigen::VectorXcd::Zero(n);
    std::vector<std::complex<double>> values;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        // accept "x" or "x+yi" / "x-yi"
        double re = 0, im = 0;
        size_t pos = item.find_first_of("+-", 1);
        while (pos != std::string::npos && (item[pos - 1] == 'e' || item[pos - 1] == 'E'))
            pos = item.find_first_of("+-", pos + 1);
        try {
            if (pos != std::string::npos && item.find('i') != std::string::npos) {
                re = std::stod(item.substr(0, pos));
                std::string rest = item.substr(pos);
                rest.erase(rest.find('i'));
                im = std::stod(rest);
            } else {
                re = std::stod(item);
            }
        } catch (const std::exception&) {
            throw ValidationError("DimensionMismatch",
                                  std::string(what) + ": cannot parse component '" + item + "'");
        }
        values.emplace_back(re, im);
    }
    if (static_cast<Eigen::Index>(values.size()) != n)
        throw ValidationError("DimensionMismatch",
                              std::string(what) + " must have " + std::to_string(n) +
                                  " comma-separated components");
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = values[static_cast<size_t>(i)];
    return v;
}

std::vector<SweepRow> sweep_rows(const LagrangianSystem& sys, const SweepResult& sw) {
    std::optional<DichotomyReport> rep;
    try {
        rep = overdamping_thresholds(sys);
    } catch (const ValidationError&) {
        // no classification possible (e.g. Omega = 0); emit raw branches
    }
    std::vector<SweepRow> rows;
    for (Eigen::Index k = 0; k < sw.beta_grid.size(); ++k) {
        const double beta = sw.beta_grid(k);
        std::vector<Mode> at_beta;
        for (const auto& branch : sw.branches) at_beta.push_back(branch[static_cast<size_t>(k)]);
        try {
            if (rep) classify(*rep, beta, at_beta);
        } catch (const NumericalError&) {
            // near the band edges the counts can be off by the eigensolver
            // tolerance; report those points unclassified
            for (auto& m : at_beta) m.klass = ModeClass::Unclassified;
        }
        for (size_t b = 0; b < at_beta.size(); ++b) {
            const Mode& m = at_beta[b];
            double q;
            try {
                q = m.q();
            } catch (const NumericalError&) {
                q = 0.0;
            }
            rows.push_back({beta, static_cast<int>(b), m.zeta.real(), m.zeta.imag(), q,
                            m.klass});
        }
    }
    return rows;
}

int run(int argc, char** argv) {
    CLI::App app{"Spectral analysis of gyroscopic-dissipative Lagrangian systems"};
    app.require_subcommand(1);

    std::string system_path, netlist_path, out_path, csv_path, which = "damping";
    std::string asym_path, thresholds_path, q0_text, qdot0_text;
    double beta = 1.0, beta_min = 0.01, beta_max = 100.0, t_end = 10.0, tol = 1e-9;
    double sample_dt = 0.0;
    int points = 0;  // 0: 50 points per decade
    bool log_flag = true;
    bool no_fit = false;

    auto add_system = [&](CLI::App* cmd) {
        cmd->add_option("--system", system_path, "system JSON file")->required();
    };

    CLI::App* c_validate = app.add_subcommand("validate", "check the structural invariants");
    add_system(c_validate);
    c_validate->add_option("--out", out_path, "write the JSON report here");

    CLI::App* c_thresholds =
        app.add_subcommand("thresholds", "characteristic scalars and overdamping thresholds");
    add_system(c_thresholds);
    c_thresholds->add_option("--out", out_path, "write the JSON report here");

    CLI::App* c_analyze = app.add_subcommand("analyze", "spectrum, classes, identity residuals");
    add_system(c_analyze);
    c_analyze->add_option("--beta", beta, "loss parameter")->required();
    c_analyze->add_option("--out", out_path, "write the JSON report here");

    CLI::App* c_sweep = app.add_subcommand("sweep", "eigenvalue branches over a beta range");
    add_system(c_sweep);
    c_sweep->add_option("--beta-min", beta_min, "smallest beta")->required();
    c_sweep->add_option("--beta-max", beta_max, "largest beta")->required();
    c_sweep->add_option("--points", points, "grid size");
    c_sweep->add_flag("--log,!--linear", log_flag, "log-spaced grid (default)");
    c_sweep->add_option("--out", out_path, "CSV output path")->required();

    CLI::App* c_asym = app.add_subcommand("asymptotics", "high-loss expansion coefficients");
    add_system(c_asym);
    c_asym->add_flag("--no-fit", no_fit, "skip the sweep-based order fit");
    c_asym->add_option("--out", out_path, "write the JSON report here");

    CLI::App* c_sim = app.add_subcommand("simulate", "integrate the evolution equations");
    add_system(c_sim);
    c_sim->add_option("--beta", beta, "loss parameter")->required();
    c_sim->add_option("--t-end", t_end, "final time")->required();
    c_sim->add_option("--tol", tol, "local error tolerance");
    c_sim->add_option("--q0", q0_text, "initial coordinates, e.g. '1,0' or '1+0.5i,0'");
    c_sim->add_option("--qdot0", qdot0_text, "initial velocities");
    c_sim->add_option("--sample-dt", sample_dt, "output sampling step");
    c_sim->add_option("--out", out_path, "write the JSON report here");

    CLI::App* c_compile = app.add_subcommand("compile", "netlist to system file");
    c_compile->add_option("--netlist", netlist_path, "netlist source")->required();
    c_compile->add_option("--out", out_path, "system JSON output path");

    CLI::App* c_plot = app.add_subcommand("plot", "render a sweep CSV as SVG");
    c_plot->add_option("--csv", csv_path, "sweep CSV input")->required();
    c_plot->add_option("--out", out_path, "SVG output path")->required();
    c_plot->add_option("--which", which, "damping|frequency|q")->required();
    c_plot->add_option("--asymptotics", asym_path, "asymptotics JSON for overlay lines");
    c_plot->add_option("--thresholds", thresholds_path, "thresholds JSON for beta markers");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    const double scale = tol_scale();

    if (c_validate->parsed()) {
        ValidationReport rep = validate(load_system(system_path));
        json j = provenance(system_path);
        j["n"] = rep.n;
        j["n_r"] = rep.n_r;
        j["loss_fraction"] = rep.loss_fraction;
        j["duality_ok"] = rep.duality_ok;
        j["alpha_min_eig"] = rep.alpha_min_eig;
        j["eta_min_eig"] = rep.eta_min_eig;
        j["r_min_eig"] = rep.r_min_eig;
        j["alpha_symmetry"] = rep.alpha_symmetry;
        j["eta_symmetry"] = rep.eta_symmetry;
        j["theta_skew"] = rep.theta_skew;
        j["r_symmetry"] = rep.r_symmetry;
        emit_report(j, out_path);
    } else if (c_thresholds->parsed()) {
        DichotomyReport rep = overdamping_thresholds(load_system(system_path));
        print_thresholds(rep);
        json j = provenance(system_path);
        j["thresholds"] = thresholds_to_json(rep);
        if (!out_path.empty()) emit_report(j, out_path);
    } else if (c_analyze->parsed()) {
        LagrangianSystem sys = load_system(system_path);
        DichotomyReport rep = overdamping_thresholds(sys);
        std::vector<Mode> modes = spectrum(sys, beta);
        classify(rep, beta, modes);
        IdentityReport ident = identity_suite(sys, beta);
        json j = provenance(system_path);
        j["beta"] = beta;
        j["thresholds"] = thresholds_to_json(rep);
        j["modes"] = json::array();
        for (const auto& m : modes) j["modes"].push_back(mode_to_json(m));
        j["identity_residuals"] = {{"symmetry", ident.symmetry},
                                   {"duality", ident.duality ? json(*ident.duality) : json(nullptr)},
                                   {"disc_excess", ident.disc_excess},
                                   {"rayleigh_re", ident.rayleigh_re},
                                   {"rayleigh_im", ident.rayleigh_im}};
        j["identity_tolerance"] = 1e-8 * scale;
        j["identity_ok"] = ident.worst() <= 1e-8 * scale;
        emit_report(j, out_path);
    } else if (c_sweep->parsed()) {
        LagrangianSystem sys = load_system(system_path);
        Eigen::VectorXd grid;
        if (beta_min == beta_max || points == 1) {
            grid = Eigen::VectorXd::Constant(1, beta_min);
        } else if (log_flag) {
            grid = log_grid(beta_min, beta_max, points);
        } else {
            grid = Eigen::VectorXd::LinSpaced(points, beta_min, beta_max);
        }
        SweepResult sw = sweep(sys, grid);
        write_text_file(out_path, write_sweep_csv(sweep_rows(sys, sw)));
    } else if (c_asym->parsed()) {
        LagrangianSystem sys = load_system(system_path);
        AsymptoticModel model = expansion_coefficients(sys);
        json j = provenance(system_path);
        auto vec = [](const Eigen::VectorXd& v) {
            json a = json::array();
            for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
            return a;
        };
        j["b_coeffs"] = vec(model.b_coeffs);
        j["rho_highloss"] = vec(model.rho_highloss);
        j["rho_lowloss"] = vec(model.rho_lowloss);
        j["d_coeffs"] = vec(model.d_coeffs);
        j["dual_slopes"] = model.dual_slopes ? vec(*model.dual_slopes) : json(nullptr);
        j["zero_d_branches"] = model.zero_d_branches;
        if (!no_fit) {
            DichotomyReport rep = characteristic_scalars(sys);
            double top = 1e3 * std::max(1.0, rep.split_threshold()) * 10.0;
            SweepResult sw = sweep(sys, log_grid(top / 1e2, top, 150));
            ResidualTable table = asymptotic_residuals(sw, model, sys);
            json rows = json::array();
            for (const auto& r : table.rows) {
                rows.push_back({{"branch", r.branch},
                                {"class", to_string(r.klass)},
                                {"coefficient", r.coefficient},
                                {"re_exponent", std::isinf(r.re_exponent) ? json("inf")
                                                                          : json(r.re_exponent)},
                                {"damping_exponent", std::isinf(r.damping_exponent)
                                                         ? json("inf")
                                                         : json(r.damping_exponent)},
                                {"re_pass", r.re_pass},
                                {"damping_pass", r.damping_pass},
                                {"q_unbounded", r.q_unbounded}});
            }
            j["order_fit"] = rows;
            j["order_fit_pass"] = table.all_pass();
        }
        emit_report(j, out_path);
    } else if (c_sim->parsed()) {
        LagrangianSystem sys = load_system(system_path);
        Eigen::VectorXcd q0 = parse_state(q0_text, sys.dof(), "--q0");
        Eigen::VectorXcd qdot0 = parse_state(qdot0_text, sys.dof(), "--qdot0");
        if (q0.norm() == 0 && qdot0.norm() == 0)
            q0 = Eigen::VectorXcd::Ones(sys.dof());
        double dt = sample_dt > 0 ? sample_dt : t_end / 400.0;
        Trajectory traj = integrate(sys, beta, q0, qdot0, t_end, tol, dt);
        json j = provenance(system_path);
        j["beta"] = beta;
        j["t_end"] = t_end;
        j["tol"] = tol;
        j["energy_balance_residual"] = energy_balance_residual(traj, sys, beta);
        json samples = json::array();
        for (size_t k = 0; k < traj.times.size(); ++k) {
            json s;
            s["t"] = traj.times[k];
            s["energy"] = traj.energy[k];
            s["dissipation"] = traj.dissipation[k];
            json q = json::array(), qd = json::array();
            for (Eigen::Index i = 0; i < traj.q[k].size(); ++i) {
                q.push_back({traj.q[k](i).real(), traj.q[k](i).imag()});
                qd.push_back({traj.qdot[k](i).real(), traj.qdot[k](i).imag()});
            }
            s["q"] = q;
            s["qdot"] = qd;
            samples.push_back(s);
        }
        j["samples"] = samples;
        emit_report(j, out_path);
    } else if (c_compile->parsed()) {
        LagrangianSystem sys = compile_netlist(parse_netlist(read_text_file(netlist_path)));
        std::string text = system_to_json(sys, std::nullopt, std::nullopt);
        if (out_path.empty())
            std::cout << text;
        else
            write_text_file(out_path, text);
    } else if (c_plot->parsed()) {
        std::vector<SweepRow> rows = read_sweep_csv(read_text_file(csv_path));
        std::optional<PlotOverlay> overlay;
        if (!asym_path.empty()) {
            json a = json::parse(read_text_file(asym_path));
            PlotOverlay o;
            for (const auto& v : a.value("b_coeffs", json::array())) o.b_coeffs.push_back(v);
            for (const auto& v : a.value("d_coeffs", json::array())) o.d_coeffs.push_back(v);
            if (a.contains("dual_slopes") && a["dual_slopes"].is_array())
                for (const auto& v : a["dual_slopes"]) o.dual_slopes.push_back(v);
            for (const auto& v : a.value("rho_lowloss", json::array())) o.rho.push_back(v);
            overlay = o;
        }
        std::optional<PlotMarkers> markers;
        if (!thresholds_path.empty()) {
            json t = json::parse(read_text_file(thresholds_path));
            json th = t.contains("thresholds") ? t["thresholds"] : t;
            PlotMarkers m;
            if (th.contains("beta0") && th["beta0"].is_number()) m.beta0 = th["beta0"];
            if (th.contains("beta1") && th["beta1"].is_number()) m.beta1 = th["beta1"];
            if (th.contains("beta2") && th["beta2"].is_number()) m.beta2 = th["beta2"];
            markers = m;
        }
        write_text_file(out_path, render_sweep_svg(rows, which, overlay, markers));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::Validation: return 2;
            case ErrorKind::Numerical: return 3;
            case ErrorKind::Io: return 4;
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
