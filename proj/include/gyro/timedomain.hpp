#pragma once

#include "gyro/system.hpp"

namespace gyro {

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> q;
    std::vector<Eigen::VectorXcd> qdot;
    std::vector<double> energy;       // H(t)
    std::vector<double> dissipation;  // 2R(qdot(t))
};

/// Adaptive Dormand-Prince 5(4) integration of the first-order form of the
/// evolution equations on (q, qdot), complex initial data allowed. Samples at
/// multiples of sample_dt when positive, at the accepted steps otherwise.
/// tol is the local error tolerance per step, restricted to [1e-12, 1e-4].
/// beta is capped at 1e6 (an explicit pair is the wrong tool beyond that).
/// Throws StepFailure when the step size underflows.
Trajectory integrate(const LagrangianSystem& sys, double beta, const Eigen::VectorXcd& q0,
                     const Eigen::VectorXcd& qdot0, double t_end, double tol,
                     double sample_dt = 0.0);

/// max over interior samples of |dH/dt + 2R| / max(1, |2R|) with centered
/// differences; a cross-check of the energy balance law -dH/dt = 2R.
/// Throws TooFewSamples below 3 samples.
double energy_balance_residual(const Trajectory& traj, const LagrangianSystem& sys, double beta);

}  // namespace gyro
