#include "gyro/timedomain.hpp"

#include <array>
#include <cmath>

namespace gyro {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kC[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kB5[7] = {35.0 / 384,     0.0,  500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kB4[7] = {5179.0 / 57600,  0.0,           7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

}  // namespace

Trajectory integrate(const LagrangianSystem& sys, double beta, const Eigen::VectorXcd& q0,
                     const Eigen::VectorXcd& qdot0, double t_end, double tol,
                     double sample_dt) {
    validate(sys);
    const Eigen::Index n = sys.dof();
    if (q0.size() != n || qdot0.size() != n)
        throw ValidationError("DimensionMismatch", "initial data must have length n");
    if (beta < 0) throw ValidationError("InvalidBeta", "beta must be nonnegative");
    if (beta > 1e6)
        throw ValidationError("InvalidBeta",
                              "beta > 1e6: the explicit integrator is not suited to this "
                              "stiffness, use a smaller beta");
    if (tol < 1e-12 || tol > 1e-4)
        throw ValidationError("InvalidTolerance", "tol must lie in [1e-12, 1e-4]");
    if (t_end <= 0) throw ValidationError("InvalidBeta", "t_end must be positive");

    const Eigen::MatrixXd alpha_inv = inverse_spd(sys.alpha);
    const Eigen::MatrixXd damping = 2.0 * sys.theta + beta * sys.r;
    auto rhs = [&](const Eigen::VectorXcd& y) {
        Eigen::VectorXcd dy(2 * n);
        dy.head(n) = y.tail(n);
        dy.tail(n) = -alpha_inv.cast<std::complex<double>>() *
                     (damping.cast<std::complex<double>>() * y.tail(n) +
                      sys.eta.cast<std::complex<double>>() * y.head(n));
        return dy;
    };

    Trajectory traj;
    auto record = [&](double t, const Eigen::VectorXcd& y) {
        traj.times.push_back(t);
        traj.q.push_back(y.head(n));
        traj.qdot.push_back(y.tail(n));
        traj.energy.push_back(hamiltonian(sys, y.head(n), y.tail(n)));
        traj.dissipation.push_back(2.0 * rayleigh_power(sys, y.tail(n), beta));
    };

    Eigen::VectorXcd y(2 * n);
    y.head(n) = q0;
    y.tail(n) = qdot0;
    double t = 0.0;
    record(t, y);
    double next_sample = sample_dt > 0 ? sample_dt : 0.0;

    double h = std::min(1e-3 * t_end, 1e-2);
    const double h_min = 1e-14 * t_end;
    std::array<Eigen::VectorXcd, 7> k;
    while (t < t_end) {
        double h_step = std::min(h, t_end - t);
        if (sample_dt > 0 && next_sample > t && next_sample <= t_end)
            h_step = std::min(h_step, next_sample - t);

        k[0] = rhs(y);
        for (int s = 1; s < 7; ++s) {
            Eigen::VectorXcd ys = y;
            for (int j = 0; j < s; ++j) ys += h_step * kA[s][j] * k[j];
            k[s] = rhs(ys);
        }
        Eigen::VectorXcd y5 = y, err = Eigen::VectorXcd::Zero(2 * n);
        for (int s = 0; s < 7; ++s) {
            y5 += h_step * kB5[s] * k[s];
            err += h_step * (kB5[s] - kB4[s]) * k[s];
        }
        const double scale = std::max(1.0, std::max(y.norm(), y5.norm()));
        const double err_norm = err.norm() / scale;

        if (err_norm <= tol) {
            t += h_step;
            y = y5;
            if (sample_dt > 0) {
                if (t >= next_sample - 1e-12 * t_end) {
                    record(t, y);
                    next_sample += sample_dt;
                }
            } else {
                record(t, y);
            }
        }
        const double safety = 0.9 * std::pow(tol / std::max(err_norm, 1e-300), 0.2);
        h = h_step * std::min(5.0, std::max(0.2, safety));
        if (h < h_min)
            throw NumericalError("StepFailure", "step size underflow at t = " + std::to_string(t));
    }
    if (traj.times.back() != t) record(t, y);
    return traj;
}

double energy_balance_residual(const Trajectory& traj, const LagrangianSystem& sys, double beta) {
    (void)sys;
    (void)beta;
    if (traj.times.size() < 3)
        throw ValidationError("TooFewSamples", "need at least 3 samples for centered differences");
    double worst = 0.0;
    for (size_t i = 1; i + 1 < traj.times.size(); ++i) {
        const double dt = traj.times[i + 1] - traj.times[i - 1];
        if (dt <= 0) continue;
        const double dh = (traj.energy[i + 1] - traj.energy[i - 1]) / dt;
        const double res = std::abs(dh + traj.dissipation[i]) / std::max(1.0, traj.dissipation[i]);
        worst = std::max(worst, res);
    }
    return worst;
}

}  // namespace gyro
