#include "gyro/canonical.hpp"

namespace gyro {

Eigen::MatrixXcd CanonicalOperator::a(double beta) const {
    const std::complex<double> i(0.0, 1.0);
    return omega - i * beta * b.cast<std::complex<double>>();
}

CanonicalOperator build_canonical(const LagrangianSystem& sys) {
    ValidationReport rep = validate(sys);
    const Eigen::Index n = sys.dof();

    Eigen::MatrixXd kp = inverse_spd(sqrt_psd(sys.alpha));  // sqrt(alpha)^{-1}
    Eigen::MatrixXd kq = sqrt_psd(sys.eta);                 // sqrt(eta)

    Eigen::MatrixXd phi = kq * kp;                // K_q K_p^T (both symmetric)
    Eigen::MatrixXd r_tilde = kp * sys.r * kp;    // K_p R K_p^T

    CanonicalOperator c;
    c.n = n;
    c.n_r = rep.n_r;

    // Omega = [[ -2i Kp theta Kp, -i Phi^T ], [ i Phi, 0 ]] = i * S, S real antisymmetric.
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    s.topLeftCorner(n, n) = -2.0 * kp * sys.theta * kp;
    s.topRightCorner(n, n) = -phi.transpose();
    s.bottomLeftCorner(n, n) = phi;
    c.omega_real = s;
    c.omega = std::complex<double>(0.0, 1.0) * s.cast<std::complex<double>>();

    c.b = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    c.b.topLeftCorner(n, n) = r_tilde;

    c.k = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    c.k.topLeftCorner(n, n) = kp;
    c.k.topRightCorner(n, n) = -kp * sys.theta;
    c.k.bottomRightCorner(n, n) = kq;
    if (rep.duality_ok) {
        Eigen::MatrixXd kinv = Eigen::MatrixXd::Zero(2 * n, 2 * n);
        Eigen::MatrixXd kp_inv = sqrt_psd(sys.alpha);
        Eigen::MatrixXd kq_inv = inverse_spd(kq);
        kinv.topLeftCorner(n, n) = kp_inv;
        kinv.topRightCorner(n, n) = kp_inv * (kp * sys.theta * kq_inv);
        kinv.bottomRightCorner(n, n) = kq_inv;
        c.k_inverse = kinv;
    }
    return c;
}

std::pair<CanonicalOperator, Eigen::MatrixXcd> build(const LagrangianSystem& sys, double beta) {
    if (beta < 0) throw ValidationError("InvalidBeta", "beta must be nonnegative");
    CanonicalOperator c = build_canonical(sys);
    Eigen::MatrixXcd a = c.a(beta);
    return {std::move(c), std::move(a)};
}

LossDecomposition loss_decomposition(const CanonicalOperator& canon) {
    const Eigen::Index two_n = 2 * canon.n;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(canon.b);
    if (solver.info() != Eigen::Success)
        throw NumericalError("ConvergenceFailure", "eigendecomposition of B failed");

    // Ascending eigenvalues: kernel first, then b_1 <= ... <= b_{N_R}.
    const Eigen::Index n_ker = two_n - canon.n_r;
    LossDecomposition d;
    d.ker_basis = solver.eigenvectors().leftCols(n_ker);
    d.ran_basis = solver.eigenvectors().rightCols(canon.n_r);
    d.p_b = d.ran_basis * d.ran_basis.transpose();
    d.p_b_perp = d.ker_basis * d.ker_basis.transpose();
    d.b2 = restrict_to_real(canon.b, d.ran_basis);
    d.omega2 = restrict_to(canon.omega, d.ran_basis.cast<std::complex<double>>());
    d.omega1 = restrict_to(canon.omega, d.ker_basis.cast<std::complex<double>>());
    d.theta_block = d.ran_basis.cast<std::complex<double>>().adjoint() * canon.omega *
                    d.ker_basis.cast<std::complex<double>>();
    return d;
}

Eigen::VectorXcd pencil_to_state_vector(const LagrangianSystem& sys, double beta,
                                        std::complex<double> zeta, const Eigen::VectorXcd& q) {
    if (q.size() != sys.dof())
        throw ValidationError("DimensionMismatch", "q must have length n");
    if (std::abs(zeta) == 0.0)
        throw ValidationError("ZeroFrequency", "the correspondence needs zeta != 0");
    if (q.norm() == 0.0) throw ValidationError("NotAnEigenpair", "q must be nonzero");

    Eigen::MatrixXcd c = pencil(sys, zeta, beta);
    double res = (c * q).norm() / (c.norm() * q.norm());
    if (res > 1e-8)
        throw NumericalError("NotAnEigenpair",
                             "pencil residual " + std::to_string(res) + " too large");

    Eigen::MatrixXd sa = sqrt_psd(sys.alpha);
    Eigen::MatrixXd se = sqrt_psd(sys.eta);
    const std::complex<double> i(0.0, 1.0);
    Eigen::VectorXcd w(2 * sys.dof());
    w.head(sys.dof()) = -i * zeta * (sa.cast<std::complex<double>>() * q);
    w.tail(sys.dof()) = se.cast<std::complex<double>>() * q;
    double nrm = w.norm();
    if (nrm == 0.0) throw NumericalError("NotAnEigenpair", "state vector vanished");
    return w / nrm;
}

Eigen::VectorXcd state_to_pencil_vector(const LagrangianSystem& sys, double beta,
                                        std::complex<double> zeta, const Eigen::VectorXcd& w) {
    const Eigen::Index n = sys.dof();
    if (w.size() != 2 * n)
        throw ValidationError("DimensionMismatch", "w must have length 2n");
    if (std::abs(zeta) == 0.0)
        throw ValidationError("ZeroFrequency", "the correspondence needs zeta != 0");

    ValidationReport rep = validate(sys);
    const std::complex<double> i(0.0, 1.0);
    Eigen::VectorXcd q;
    if (rep.duality_ok) {
        Eigen::MatrixXd se_inv = inverse_spd(sqrt_psd(sys.eta));
        q = se_inv.cast<std::complex<double>>() * w.tail(n);
    } else {
        Eigen::MatrixXd sa_inv = inverse_spd(sqrt_psd(sys.alpha));
        q = (sa_inv.cast<std::complex<double>>() * w.head(n)) / (-i * zeta);
    }
    double qn = q.norm();
    if (qn == 0.0) throw NumericalError("NotAnEigenpair", "recovered q vanished");
    q /= qn;
    Eigen::MatrixXcd c = pencil(sys, zeta, beta);
    double res = (c * q).norm() / std::max(c.norm(), 1e-300);
    if (res > 1e-8)
        throw NumericalError("NotAnEigenpair",
                             "pencil residual " + std::to_string(res) + " too large");
    return q;
}

}  // namespace gyro
