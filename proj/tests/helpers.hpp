#pragma once

#include <complex>
#include <random>

#include "gyro/netlist.hpp"
#include "gyro/system.hpp"

namespace gyro::testing {

// Circuit element values used throughout the worked example.
struct CircuitValues {
    double c1 = 25.0;
    double c2 = 25.0;
    double c12 = 25.0 / 3.0;
    double l1 = 10.0;
    double l2 = 0.5;
    double g12 = 2.5;
    double ell = 10.0;
};

inline const char* circuit_netlist_text() {
    return "loop 1 { L 10 C 25 }\n"
           "loop 2 { L 0.5 C 25 R 10 }\n"
           "couple 1 2 { C 8.3333333333333339 G 2.5 }\n";
}

inline LagrangianSystem circuit_system() {
    CircuitValues v;
    LagrangianSystem sys;
    sys.alpha = Eigen::MatrixXd::Zero(2, 2);
    sys.alpha(0, 0) = v.l1;
    sys.alpha(1, 1) = v.l2;
    sys.eta = Eigen::MatrixXd(2, 2);
    sys.eta << 1 / v.c1 + 1 / v.c12, -1 / v.c12, -1 / v.c12, 1 / v.c2 + 1 / v.c12;
    sys.theta = Eigen::MatrixXd(2, 2);
    sys.theta << 0, -v.g12 / 2, v.g12 / 2, 0;
    sys.r = Eigen::MatrixXd::Zero(2, 2);
    sys.r(1, 1) = v.ell;
    return sys;
}

// Closed forms for the circuit's characteristic frequencies.
struct CircuitOracle {
    double a;          // trace term of the beta = 0 dispersion relation
    double det_ratio;  // det(eta) / det(alpha)
    double omega_max;
    double omega_min;
    double b_min;       // ell / L2
    double b_min_dual;  // ell / (1/C2 + 1/(C1+C12))^{-1}... see below
    double rho3;        // sqrt((1/C1 + 1/C12) / L1)
    double beta0;
    double beta1;
    double beta2;
    double d34;         // damping slope of the high-Q pair
    double dual_slope;  // 1 / b_min_dual

    CircuitOracle() {
        CircuitValues v;
        a = 1 / (v.l2 * v.c12) + 1 / (v.l1 * v.c12) + 1 / (v.l2 * v.c2) + 1 / (v.l1 * v.c1) +
            v.g12 * v.g12 / (v.l1 * v.l2);
        det_ratio = (1 / (v.c1 * v.c2) + 1 / (v.c1 * v.c12) + 1 / (v.c2 * v.c12)) / (v.l1 * v.l2);
        omega_max = std::sqrt(a / 2 + std::sqrt(a * a / 4 - det_ratio));
        omega_min = std::sqrt(a / 2 - std::sqrt(a * a / 4 - det_ratio));
        b_min = v.ell / v.l2;
        b_min_dual = v.ell / (1 / v.c2 + 1 / (v.c1 + v.c12));
        rho3 = std::sqrt((1 / v.c1 + 1 / v.c12) / v.l1);
        beta0 = 2 * omega_max / b_min;
        beta1 = 2 * (1 / omega_min) / b_min_dual;
        // beta2 = c^{-1}(rho_min / 2) with c^{-1}(y) = (2 w^2/b)/y + 2 w/b
        beta2 = (2 * omega_max * omega_max / b_min) / (rho3 / 2) + beta0;
        d34 = 0.5 * v.g12 * v.g12 / (v.ell * v.l1) +
              0.5 / v.ell * v.c1 / ((v.c1 + v.c12) * v.c12);
        dual_slope = 1 / b_min_dual;
    }
};

// Paper-quoted decimals for the circuit thresholds.
inline constexpr double kBeta0Printed = 0.1258803552;
inline constexpr double kBeta1Printed = 0.3723591130;
inline constexpr double kBeta2Printed = 2.631331413;

inline LagrangianSystem spring_mass_damper(double m = 1.0, double k = 1.0, double r = 1.0) {
    LagrangianSystem sys;
    sys.alpha = Eigen::MatrixXd::Constant(1, 1, m);
    sys.eta = Eigen::MatrixXd::Constant(1, 1, k);
    sys.theta = Eigen::MatrixXd::Zero(1, 1);
    sys.r = Eigen::MatrixXd::Constant(1, 1, r);
    return sys;
}

inline std::complex<double> smd_zeta(double m, double k, double r, double beta, int j) {
    // -i beta r / (2m) + (-1)^j sqrt(k/m - (beta r / (2m))^2)
    const std::complex<double> i(0, 1);
    std::complex<double> half = beta * r / (2 * m);
    std::complex<double> root = std::sqrt(std::complex<double>(k / m) - half * half);
    return -i * half + (j % 2 == 0 ? root : -root);
}

// alpha = eta = r = identity with a single antisymmetric rotation block of
// strength g. The spectrum of i*theta is {+g, -g} padded with zeros, so the
// eigenvalues follow the gyroscopic closed form per lambda in that set.
inline LagrangianSystem nodex_system(int n, double g) {
    LagrangianSystem sys;
    sys.alpha = Eigen::MatrixXd::Identity(n, n);
    sys.eta = Eigen::MatrixXd::Identity(n, n);
    sys.r = Eigen::MatrixXd::Identity(n, n);
    sys.theta = Eigen::MatrixXd::Zero(n, n);
    if (n >= 2) {
        sys.theta(0, 1) = g;
        sys.theta(1, 0) = -g;
    }
    return sys;
}

inline std::vector<double> nodex_lambdas(int n, double g) {
    std::vector<double> l;
    if (n >= 2) {
        l.push_back(g);
        l.push_back(-g);
    }
    for (int k = 2; k < n; ++k) l.push_back(0.0);
    if (n == 1) l.push_back(0.0);
    return l;
}

inline std::complex<double> nodex_zeta(double lambda, double beta, int sign) {
    const std::complex<double> i(0, 1);
    std::complex<double> half = (2.0 * lambda + i * beta) / 2.0;
    std::complex<double> root = std::sqrt(half * half + 1.0);
    return -half + (sign > 0 ? root : -root);
}

/// Random valid system: alpha SPD, eta PSD (definite when eta_definite),
/// theta antisymmetric, r PSD with the requested rank and simple nonzero
/// spectrum. Deterministic in the seed.
inline LagrangianSystem random_system(std::mt19937_64& rng, int n, int n_r, bool eta_definite,
                                      bool gyroscopic = true) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto randm = [&](int rows, int cols) {
        Eigen::MatrixXd m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = gauss(rng);
        return m;
    };

    LagrangianSystem sys;
    Eigen::MatrixXd a = randm(n, n);
    sys.alpha = a * a.transpose() + 0.3 * Eigen::MatrixXd::Identity(n, n);
    if (eta_definite) {
        Eigen::MatrixXd e = randm(n, n);
        sys.eta = e * e.transpose() + 0.3 * Eigen::MatrixXd::Identity(n, n);
    } else {
        const int rank = std::max(1, n - 1);
        Eigen::MatrixXd e = randm(n, rank);
        sys.eta = e * e.transpose();
    }
    if (gyroscopic) {
        Eigen::MatrixXd t = randm(n, n);
        sys.theta = (t - t.transpose()) / 2.0;
    } else {
        sys.theta = Eigen::MatrixXd::Zero(n, n);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(randm(n, n));
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    std::uniform_real_distribution<double> uni(0.5, 2.0);
    double v = uni(rng);
    for (int k = 0; k < n_r; ++k) {
        diag(k) = v;
        v *= 1.0 + uni(rng);  // simple, well separated
    }
    sys.r = q * diag.asDiagonal() * q.transpose();
    sys.r = (sys.r + sys.r.transpose()) / 2.0;
    return sys;
}

}  // namespace gyro::testing
