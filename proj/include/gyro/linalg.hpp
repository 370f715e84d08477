#pragma once

#include <Eigen/Dense>
#include <complex>

#include "gyro/errors.hpp"

namespace gyro {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Default numerical tolerances (relative where a norm is involved).
struct Tolerances {
    double eig = 1e-10;        // eigenpair residual bound, relative to ||M||_F
    double herm = 1e-12;       // Hermitian symmetry residual
    double rank = 1e-10;       // numerical-rank / kernel cutoff
    double defective = 1e-8;   // near-defective flag on min vector separation
};

struct EigenDecomposition {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;  // unit-norm columns, aligned with values
    bool near_defective = false;
    double min_vector_separation = 1.0;  // smallest singular value of the vector matrix
};

/// Eigendecomposition of a Hermitian matrix. Values are real (returned on the
/// real axis), sorted ascending, with orthonormal eigenvectors.
/// Throws NotHermitian if ||m - m*|| > tol_herm * ||m||, NonFinite on NaN/Inf.
EigenDecomposition eig_hermitian(const ComplexMatrix& m, double tol_herm = Tolerances{}.herm);

/// General dense complex eigendecomposition (balanced QR iteration).
/// Throws ConvergenceFailure if the iteration fails; NonFinite on bad input.
EigenDecomposition eig_general(const ComplexMatrix& m);

/// Real-matrix specialization of eig_general. Real eigenvalues come back with
/// exactly zero imaginary part and complex ones in exact conjugate pairs.
EigenDecomposition eig_general_real(const Eigen::MatrixXd& m);

/// Orthonormal basis (columns) of the numerical kernel of a Hermitian PSD
/// matrix: span of eigenvectors with eigenvalue < tol_rank * max eigenvalue.
/// Empty (n x 0) when m is definite.
ComplexMatrix kernel_basis(const ComplexMatrix& m, double tol_rank = Tolerances{}.rank);
Eigen::MatrixXd kernel_basis_real(const Eigen::MatrixXd& m, double tol_rank = Tolerances{}.rank);

/// Numerical rank of a Hermitian PSD matrix (dimension minus kernel size).
Eigen::Index psd_rank(const Eigen::MatrixXd& m, double tol_rank = Tolerances{}.rank);

/// Compression of m onto a set of orthonormal columns: entries (b_i, m b_j).
/// Throws DimensionMismatch.
ComplexMatrix restrict_to(const ComplexMatrix& m, const ComplexMatrix& basis);
Eigen::MatrixXd restrict_to_real(const Eigen::MatrixXd& m, const Eigen::MatrixXd& basis);

/// PSD square root via Hermitian eigendecomposition, eigenvalues below
/// tol_rank * max clamped to zero.
Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& m, double tol_rank = Tolerances{}.rank);

/// Inverse of a symmetric positive definite matrix.
Eigen::MatrixXd inverse_spd(const Eigen::MatrixXd& m);

}  // namespace gyro
