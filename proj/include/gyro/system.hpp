#pragma once

#include <Eigen/Dense>
#include <complex>

#include "gyro/linalg.hpp"

namespace gyro {

/// A finite-dimensional gyroscopic-dissipative Lagrangian system
///   alpha q'' + (2 theta + beta r) q' + eta q = 0
/// with alpha symmetric positive definite, eta symmetric PSD, theta
/// antisymmetric, r symmetric PSD of positive rank. beta is never stored:
/// it is the sweep parameter of every analysis.
struct LagrangianSystem {
    Eigen::MatrixXd alpha;
    Eigen::MatrixXd eta;
    Eigen::MatrixXd theta;
    Eigen::MatrixXd r;
    /// Kernel-reduced systems are lossless by construction and carry r == 0;
    /// the flag exempts them from the rank(r) > 0 invariant.
    bool conservative = false;

    Eigen::Index dof() const { return alpha.rows(); }
};

struct ValidationReport {
    double alpha_symmetry = 0;  // relative symmetry residuals
    double eta_symmetry = 0;
    double theta_skew = 0;
    double r_symmetry = 0;
    double alpha_min_eig = 0;
    double eta_min_eig = 0;
    double r_min_eig = 0;
    Eigen::Index n = 0;
    Eigen::Index n_r = 0;
    bool duality_ok = false;        // eta > 0
    double loss_fraction = 0;       // n_r / n
};

/// Checks the structural invariants; throws on hard violations
/// (AlphaNotPositiveDefinite, EtaNotPSD, ThetaNotSkew, RNotPSD, RZero,
/// DimensionMismatch, NonFinite), returns residuals otherwise.
ValidationReport validate(const LagrangianSystem& sys);

/// The dual system: alpha and eta interchanged, theta and r unchanged.
/// Requires eta > 0 (DualityUnavailable otherwise). An exact involution.
LagrangianSystem dual(const LagrangianSystem& sys);

/// Quadratic pencil C(zeta, beta) = zeta^2 alpha + (2 theta + beta r) i zeta - eta.
Eigen::MatrixXcd pencil(const LagrangianSystem& sys, std::complex<double> zeta, double beta);

/// Total energy H = (qdot, alpha qdot)/2 + (q, eta q)/2 in the complex inner
/// product; nonnegative.
double hamiltonian(const LagrangianSystem& sys, const Eigen::VectorXcd& q,
                   const Eigen::VectorXcd& qdot);

/// Instantaneous dissipated power 2R = beta (qdot, r qdot); this returns the
/// Rayleigh function R itself, i.e. half of it.
double rayleigh_power(const LagrangianSystem& sys, const Eigen::VectorXcd& qdot, double beta);

/// The lossless system obtained by compressing (alpha, eta, theta) onto an
/// orthonormal basis of Ker r; carries r = 0 and the conservative flag.
/// Throws FullRankDissipation when rank r = n.
LagrangianSystem kernel_reduced_system(const LagrangianSystem& sys);

}  // namespace gyro
