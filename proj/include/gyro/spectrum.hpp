#pragma once

#include <optional>
#include <vector>

#include "gyro/canonical.hpp"

namespace gyro {

enum class ModeClass { Unclassified, HighLoss, LowLossLowQ, LowLossHighQ };

const char* to_string(ModeClass k);

/// One eigenmode at a fixed beta: eigenpair of A(beta), frequency Re zeta,
/// damping factor -Im zeta, Q-factor, and its dichotomy class.
struct Mode {
    double beta = 0;
    std::complex<double> zeta;
    Eigen::VectorXcd w;  // unit state eigenvector
    ModeClass klass = ModeClass::Unclassified;

    double frequency() const { return zeta.real(); }
    double damping() const { return -zeta.imag(); }
    double q() const;
};

/// All 2N modes of the system at the given beta, sorted by damping descending
/// then frequency ascending. Classes are Unclassified until classify().
std::vector<Mode> spectrum(const LagrangianSystem& sys, double beta);

/// Q = |Re zeta| / (2 * (-Im zeta)), with Q = +inf for lossless oscillation
/// and Q = 0 at zeta = 0. Throws GrowingMode for Im zeta > 0 beyond tolerance.
double q_factor(std::complex<double> zeta);

/// Every characteristic scalar and threshold of the dichotomy/overdamping
/// analysis. Dual and rho quantities are absent when unavailable (singular
/// eta, full-rank dissipation); beta0/beta1 are absent when the relevant
/// eigenvalue gap vanishes (nongeneric).
struct DichotomyReport {
    Eigen::Index n = 0;
    Eigen::Index n_r = 0;
    double omega_max = 0;
    double omega_min = 0;
    double b_min = 0;
    double b_max = 0;
    bool duality_ok = false;
    std::optional<double> omega_max_dual;  // = 1 / omega_min
    std::optional<double> b_min_dual;
    std::optional<double> b_max_dual;
    std::optional<double> rho_min, rho_max;
    std::optional<double> rho_min_dual, rho_max_dual;
    double d_gap = 0;                      // min gap of sigma(B) including b_0 = 0
    std::optional<double> d_gap_dual;
    bool generic = false;
    std::optional<bool> generic_dual;
    std::optional<double> beta0, beta1, beta2;

    /// Perturbation radius c(beta), decreasing on (2 omega_max / b_min, inf).
    double c(double beta) const;
    /// Inverse of c, defined for y > 0.
    double c_inv(double y) const;
    std::optional<double> c_dual(double beta) const;
    std::optional<double> c_inv_dual(double y) const;

    /// High/low split threshold 2 omega_max / b_min.
    double split_threshold() const { return 2.0 * omega_max / b_min; }
    /// Three-way split threshold max{2 w/b, 2 w_dual/b_dual}; absent without duality.
    std::optional<double> dual_split_threshold() const;
};

/// omega_max / omega_min / b_min plus the dual scalars (partial report).
/// Throws ZeroOmega when Omega = 0 (theta = 0 and eta = 0).
DichotomyReport characteristic_scalars(const LagrangianSystem& sys);

/// Spectrum of Omega_1 (the compression of Omega to Ker B) and the limiting
/// frequencies rho_min/rho_max with their duals.
struct LimitingFrequencies {
    Eigen::VectorXd omega1_spectrum;    // sorted ascending, symmetric about 0
    Eigen::Index zero_multiplicity = 0;
    double rho_min = 0;
    double rho_max = 0;
    std::optional<double> rho_min_dual, rho_max_dual;
};
LimitingFrequencies limiting_frequencies(const LagrangianSystem& sys);

/// The complete report: scalars, gaps, generic flags, beta0/beta1/beta2.
DichotomyReport overdamping_thresholds(const LagrangianSystem& sys);

/// Assigns dichotomy classes by the |zeta| bands once beta is above the
/// applicable thresholds; modes stay Unclassified below them. Band counts are
/// checked against (N_R, N_R, 2N-2N_R); CountMismatch signals a numerical
/// failure or threshold misuse.
void classify(const DichotomyReport& report, double beta, std::vector<Mode>& modes);
std::vector<Mode> classify(const LagrangianSystem& sys, double beta, std::vector<Mode> modes);

/// Residuals of the spectral identities at one beta; pure reporting.
struct IdentityReport {
    double symmetry = 0;                 // sigma(A) vs -conj sigma(A)
    std::optional<double> duality;       // sigma(A) vs -1/sigma(A_dual)
    double disc_excess = 0;              // Gershgorin-style disc containment
    double rayleigh_re = 0;              // Re zeta vs (w, Omega w)
    double rayleigh_im = 0;              // -Im zeta vs beta (w, B w)
    double worst() const;
};
IdentityReport identity_suite(const LagrangianSystem& sys, double beta);

/// Greedy matching distance between two equal-size spectral multisets,
/// relative to their scale.
double spectral_set_distance(std::vector<std::complex<double>> a,
                             std::vector<std::complex<double>> b);

}  // namespace gyro
