#include "gyro/system.hpp"

namespace gyro {

namespace {

double sym_residual(const Eigen::MatrixXd& m) {
    double scale = m.norm();
    if (scale == 0) return 0.0;
    return (m - m.transpose()).norm() / scale;
}

double skew_residual(const Eigen::MatrixXd& m) {
    double scale = m.norm();
    if (scale == 0) return 0.0;
    return (m + m.transpose()).norm() / scale;
}

double min_sym_eig(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s((m + m.transpose()) / 2.0,
                                                     Eigen::EigenvaluesOnly);
    return s.eigenvalues()(0);
}

constexpr double kStructTol = 1e-10;

}  // namespace

ValidationReport validate(const LagrangianSystem& sys) {
    const Eigen::Index n = sys.alpha.rows();
    auto square_of = [n](const Eigen::MatrixXd& m) { return m.rows() == n && m.cols() == n; };
    if (n == 0 || !square_of(sys.alpha) || !square_of(sys.eta) || !square_of(sys.theta) ||
        !square_of(sys.r))
        throw ValidationError("DimensionMismatch", "matrices must be square of equal dimension");
    for (const auto* m : {&sys.alpha, &sys.eta, &sys.theta, &sys.r})
        if (!m->allFinite()) throw NumericalError("NonFinite", "matrix contains NaN or Inf");

    ValidationReport rep;
    rep.n = n;
    rep.alpha_symmetry = sym_residual(sys.alpha);
    rep.eta_symmetry = sym_residual(sys.eta);
    rep.theta_skew = skew_residual(sys.theta);
    rep.r_symmetry = sym_residual(sys.r);
    rep.alpha_min_eig = min_sym_eig(sys.alpha);
    rep.eta_min_eig = min_sym_eig(sys.eta);
    rep.r_min_eig = min_sym_eig(sys.r);

    if (rep.alpha_symmetry > kStructTol || rep.alpha_min_eig <= kStructTol * sys.alpha.norm())
        throw ValidationError("AlphaNotPositiveDefinite",
                              "alpha must be symmetric positive definite");
    double eta_scale = std::max(sys.eta.norm(), 1.0);
    if (rep.eta_symmetry > kStructTol || rep.eta_min_eig < -kStructTol * eta_scale)
        throw ValidationError("EtaNotPSD", "eta must be symmetric positive semidefinite");
    if (rep.theta_skew > kStructTol)
        throw ValidationError("ThetaNotSkew", "theta must be antisymmetric");
    double r_scale = std::max(sys.r.norm(), 1.0);
    if (rep.r_symmetry > kStructTol || rep.r_min_eig < -kStructTol * r_scale)
        throw ValidationError("RNotPSD", "r must be symmetric positive semidefinite");

    rep.n_r = psd_rank(sys.r);
    if (rep.n_r == 0 && !sys.conservative)
        throw ValidationError("RZero", "dissipation matrix has rank zero");
    rep.duality_ok = rep.eta_min_eig > kStructTol * eta_scale;
    rep.loss_fraction = static_cast<double>(rep.n_r) / static_cast<double>(n);
    return rep;
}

LagrangianSystem dual(const LagrangianSystem& sys) {
    if (min_sym_eig(sys.eta) <= kStructTol * std::max(sys.eta.norm(), 1.0))
        throw ValidationError("DualityUnavailable", "eta is singular; the dual system needs eta > 0");
    LagrangianSystem d = sys;
    std::swap(d.alpha, d.eta);
    return d;
}

Eigen::MatrixXcd pencil(const LagrangianSystem& sys, std::complex<double> zeta, double beta) {
    const std::complex<double> i(0.0, 1.0);
    return zeta * zeta * sys.alpha.cast<std::complex<double>>() +
           i * zeta * (2.0 * sys.theta + beta * sys.r).cast<std::complex<double>>() -
           sys.eta.cast<std::complex<double>>();
}

double hamiltonian(const LagrangianSystem& sys, const Eigen::VectorXcd& q,
                   const Eigen::VectorXcd& qdot) {
    if (q.size() != sys.dof() || qdot.size() != sys.dof())
        throw ValidationError("DimensionMismatch", "state vectors must have length n");
    std::complex<double> t = qdot.dot(sys.alpha.cast<std::complex<double>>() * qdot);
    std::complex<double> v = q.dot(sys.eta.cast<std::complex<double>>() * q);
    return 0.5 * (t.real() + v.real());
}

double rayleigh_power(const LagrangianSystem& sys, const Eigen::VectorXcd& qdot, double beta) {
    if (qdot.size() != sys.dof())
        throw ValidationError("DimensionMismatch", "velocity vector must have length n");
    std::complex<double> p = qdot.dot(sys.r.cast<std::complex<double>>() * qdot);
    return 0.5 * beta * p.real();
}

LagrangianSystem kernel_reduced_system(const LagrangianSystem& sys) {
    Eigen::MatrixXd basis = kernel_basis_real(sys.r);
    if (basis.cols() == 0)
        throw ValidationError("FullRankDissipation", "Ker r is trivial (rank r = n)");
    LagrangianSystem red;
    red.alpha = restrict_to_real(sys.alpha, basis);
    red.eta = restrict_to_real(sys.eta, basis);
    red.theta = restrict_to_real(sys.theta, basis);
    red.r = Eigen::MatrixXd::Zero(basis.cols(), basis.cols());
    red.conservative = true;
    return red;
}

}  // namespace gyro
