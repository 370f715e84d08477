#pragma once

#include <optional>
#include <utility>

#include "gyro/system.hpp"

namespace gyro {

/// Canonical first-order form of the evolution equations: v' = -i A(beta) v
/// with A(beta) = Omega - i beta B on C^{2N}. Omega is Hermitian and equals
/// i K J K^T for the real change-of-variables matrix K, so A(beta) = i G(beta)
/// with G real; B is real PSD of rank N_R.
struct CanonicalOperator {
    Eigen::MatrixXcd omega;                   // 2N x 2N Hermitian, Omega = i * omega_real
    Eigen::MatrixXd omega_real;               // real antisymmetric S with Omega = i S
    Eigen::MatrixXd b;                        // 2N x 2N real PSD
    Eigen::MatrixXd k;                        // change-of-variables matrix
    std::optional<Eigen::MatrixXd> k_inverse; // present when eta > 0
    Eigen::Index n = 0;
    Eigen::Index n_r = 0;                     // rank B = rank r

    /// A(beta) = Omega - i beta B.
    Eigen::MatrixXcd a(double beta) const;

    /// The real matrix G(beta) with A(beta) = i G(beta).
    Eigen::MatrixXd generator(double beta) const { return omega_real - beta * b; }
};

/// Performs the change of variables and assembles Omega, B, K.
CanonicalOperator build_canonical(const LagrangianSystem& sys);

/// Spec-shaped convenience: the operator together with A(beta).
std::pair<CanonicalOperator, Eigen::MatrixXcd> build(const LagrangianSystem& sys, double beta);

/// Splitting of C^{2N} into the loss subspace Ran B and its complement Ker B,
/// with the blocks of Omega in those bases.
struct LossDecomposition {
    Eigen::MatrixXd ran_basis;   // 2N x N_R, orthonormal, B-eigenvalues ascending
    Eigen::MatrixXd ker_basis;   // 2N x (2N - N_R), orthonormal
    Eigen::MatrixXd p_b;         // projection onto Ran B
    Eigen::MatrixXd p_b_perp;    // projection onto Ker B
    Eigen::MatrixXd b2;          // N_R x N_R positive definite
    Eigen::MatrixXcd omega2;     // N_R x N_R Hermitian
    Eigen::MatrixXcd omega1;     // (2N-N_R) x (2N-N_R) Hermitian
    Eigen::MatrixXcd theta_block;  // N_R x (2N-N_R): ran* Omega ker
};

LossDecomposition loss_decomposition(const CanonicalOperator& canon);

/// Maps a pencil eigenpair C(zeta, beta) q = 0 to the state eigenvector
/// w = [-i zeta sqrt(alpha) q; sqrt(eta) q] (unit-normalized).
/// Throws ZeroFrequency for zeta = 0, NotAnEigenpair when the pencil residual
/// exceeds tolerance.
Eigen::VectorXcd pencil_to_state_vector(const LagrangianSystem& sys, double beta,
                                        std::complex<double> zeta, const Eigen::VectorXcd& q);

/// Inverse map: recovers q from a state eigenpair A(beta) w = zeta w. Uses the
/// lower block through sqrt(eta)^{-1} when eta > 0, otherwise the upper block
/// through (-i zeta)^{-1} sqrt(alpha)^{-1} (the lower-block route is ambiguous
/// on Ker eta).
Eigen::VectorXcd state_to_pencil_vector(const LagrangianSystem& sys, double beta,
                                        std::complex<double> zeta, const Eigen::VectorXcd& w);

}  // namespace gyro
