#include "gyro/linalg.hpp"

#include <algorithm>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace gyro {

namespace {

void require_finite(const ComplexMatrix& m) {
    if (!m.allFinite()) throw NumericalError("NonFinite", "matrix contains NaN or Inf entries");
}

void require_square(const ComplexMatrix& m) {
    if (m.rows() != m.cols())
        throw ValidationError("DimensionMismatch", "matrix is not square");
}

// Post-conditions shared by the general eigensolvers: unit columns, residual
// bound, defectiveness flag from the conditioning of the eigenvector matrix.
void finalize_general(const ComplexMatrix& m, EigenDecomposition& d) {
    const auto n = m.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        double nrm = d.vectors.col(j).norm();
        if (nrm > 0) d.vectors.col(j) /= nrm;
    }
    const double scale = m.norm();
    const Tolerances tol;
    for (Eigen::Index j = 0; j < n; ++j) {
        double res = (m * d.vectors.col(j) - d.values(j) * d.vectors.col(j)).norm();
        if (res > tol.eig * std::max(scale, 1e-300))
            throw NumericalError("ConvergenceFailure",
                                 "eigenpair residual " + std::to_string(res) +
                                     " exceeds tolerance");
    }
    if (n > 0) {
        Eigen::JacobiSVD<ComplexMatrix> svd(d.vectors);
        d.min_vector_separation = svd.singularValues()(n - 1);
    }
    d.near_defective = d.min_vector_separation < tol.defective;
}

}  // namespace

EigenDecomposition eig_hermitian(const ComplexMatrix& m, double tol_herm) {
    require_square(m);
    require_finite(m);
    const double scale = m.norm();
    if ((m - m.adjoint()).norm() > tol_herm * std::max(scale, 1e-300) && scale > 0)
        throw ValidationError("NotHermitian", "symmetry residual exceeds tolerance");

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver((m + m.adjoint()) / 2.0);
    if (solver.info() != Eigen::Success)
        throw NumericalError("ConvergenceFailure", "Hermitian eigensolver failed");

    EigenDecomposition d;
    d.values = solver.eigenvalues().cast<std::complex<double>>();
    d.vectors = solver.eigenvectors();
    d.near_defective = false;
    d.min_vector_separation = 1.0;
    return d;
}

EigenDecomposition eig_general(const ComplexMatrix& m) {
    require_square(m);
    require_finite(m);
    const auto n = m.rows();
    EigenDecomposition d;
    d.values.resize(n);
    d.vectors.resize(n, n);
    if (n == 0) return d;

    ComplexMatrix work = m;  // zgeev overwrites its input
    int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', static_cast<lapack_int>(n),
                             work.data(), static_cast<lapack_int>(n), d.values.data(), nullptr, 1,
                             d.vectors.data(), static_cast<lapack_int>(n));
    if (info != 0)
        throw NumericalError("ConvergenceFailure",
                             "zgeev failed with info = " + std::to_string(info));
    finalize_general(m, d);
    return d;
}

EigenDecomposition eig_general_real(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols())
        throw ValidationError("DimensionMismatch", "matrix is not square");
    if (!m.allFinite()) throw NumericalError("NonFinite", "matrix contains NaN or Inf entries");
    const auto n = m.rows();
    EigenDecomposition d;
    d.values.resize(n);
    d.vectors.resize(n, n);
    if (n == 0) return d;

    Eigen::MatrixXd work = m;
    Eigen::VectorXd wr(n), wi(n);
    Eigen::MatrixXd vr(n, n);
    int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', static_cast<lapack_int>(n),
                             work.data(), static_cast<lapack_int>(n), wr.data(), wi.data(),
                             nullptr, 1, vr.data(), static_cast<lapack_int>(n));
    if (info != 0)
        throw NumericalError("ConvergenceFailure",
                             "dgeev failed with info = " + std::to_string(info));

    // Unpack the packed real-Schur eigenvector convention: a conjugate pair
    // (wr +- i wi) stores Re v and Im v in adjacent columns.
    for (Eigen::Index j = 0; j < n; ++j) {
        d.values(j) = {wr(j), wi(j)};
        if (wi(j) != 0.0 && j + 1 < n && wi(j + 1) == -wi(j)) {
            d.vectors.col(j) = vr.col(j) + std::complex<double>(0, 1) * vr.col(j + 1);
            d.vectors.col(j + 1) = vr.col(j) - std::complex<double>(0, 1) * vr.col(j + 1);
            d.values(j + 1) = {wr(j + 1), wi(j + 1)};
            ++j;
        } else {
            d.vectors.col(j) = vr.col(j).cast<std::complex<double>>();
        }
    }
    finalize_general(m.cast<std::complex<double>>(), d);
    return d;
}

ComplexMatrix kernel_basis(const ComplexMatrix& m, double tol_rank) {
    EigenDecomposition d = eig_hermitian(m);
    const auto n = m.rows();
    double max_ev = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) max_ev = std::max(max_ev, std::abs(d.values(i).real()));
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < n; ++i)
        if (d.values(i).real() < tol_rank * std::max(max_ev, 1e-300) || max_ev == 0.0)
            keep.push_back(i);
    ComplexMatrix basis(n, static_cast<Eigen::Index>(keep.size()));
    for (size_t k = 0; k < keep.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = d.vectors.col(keep[k]);
    return basis;
}

Eigen::MatrixXd kernel_basis_real(const Eigen::MatrixXd& m, double tol_rank) {
    if (m.rows() != m.cols())
        throw ValidationError("DimensionMismatch", "matrix is not square");
    if (!m.allFinite()) throw NumericalError("NonFinite", "matrix contains NaN or Inf entries");
    const double scale = m.norm();
    if (scale > 0 && (m - m.transpose()).norm() > Tolerances{}.herm * scale)
        throw ValidationError("NotHermitian", "symmetry residual exceeds tolerance");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver((m + m.transpose()) / 2.0);
    if (solver.info() != Eigen::Success)
        throw NumericalError("ConvergenceFailure", "symmetric eigensolver failed");
    const auto n = m.rows();
    double max_ev = solver.eigenvalues().cwiseAbs().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < n; ++i)
        if (solver.eigenvalues()(i) < tol_rank * std::max(max_ev, 1e-300) || max_ev == 0.0)
            keep.push_back(i);
    Eigen::MatrixXd basis(n, static_cast<Eigen::Index>(keep.size()));
    for (size_t k = 0; k < keep.size(); ++k) {
        Eigen::VectorXd v = solver.eigenvectors().col(keep[k]);
        // deterministic sign: largest-magnitude component positive
        Eigen::Index imax;
        v.cwiseAbs().maxCoeff(&imax);
        if (v(imax) < 0) v = -v;
        basis.col(static_cast<Eigen::Index>(k)) = v;
    }
    return basis;
}

Eigen::Index psd_rank(const Eigen::MatrixXd& m, double tol_rank) {
    return m.rows() - kernel_basis_real(m, tol_rank).cols();
}

ComplexMatrix restrict_to(const ComplexMatrix& m, const ComplexMatrix& basis) {
    if (basis.rows() != m.rows() || m.rows() != m.cols())
        throw ValidationError("DimensionMismatch", "basis incompatible with matrix");
    return basis.adjoint() * m * basis;
}

Eigen::MatrixXd restrict_to_real(const Eigen::MatrixXd& m, const Eigen::MatrixXd& basis) {
    if (basis.rows() != m.rows() || m.rows() != m.cols())
        throw ValidationError("DimensionMismatch", "basis incompatible with matrix");
    return basis.transpose() * m * basis;
}

Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& m, double tol_rank) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver((m + m.transpose()) / 2.0);
    if (solver.info() != Eigen::Success)
        throw NumericalError("ConvergenceFailure", "symmetric eigensolver failed");
    Eigen::VectorXd ev = solver.eigenvalues();
    const double max_ev = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        ev(i) = ev(i) < tol_rank * std::max(max_ev, 1e-300) ? 0.0 : std::sqrt(ev(i));
    return solver.eigenvectors() * ev.asDiagonal() * solver.eigenvectors().transpose();
}

Eigen::MatrixXd inverse_spd(const Eigen::MatrixXd& m) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw ValidationError("AlphaNotPositiveDefinite", "matrix is not positive definite");
    return llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

}  // namespace gyro
