#pragma once

#include "gyro/spectrum.hpp"

namespace gyro {

/// Leading high-loss-regime coefficients of the 2N eigenvalue branches:
/// high-loss branches behave as zeta ~ -i b_j beta + rho_j, low-loss branches
/// as zeta ~ rho_j - i d_j / beta.
struct AsymptoticModel {
    Eigen::VectorXd b_coeffs;       // N_R, ascending
    Eigen::VectorXd rho_highloss;   // N_R, aligned with b_coeffs
    Eigen::VectorXd rho_lowloss;    // 2N - N_R, ascending (contains the kernel zeros)
    Eigen::VectorXd d_coeffs;       // aligned with rho_lowloss, each >= 0
    std::optional<Eigen::VectorXd> dual_slopes;  // N_R values 1/b_j' (eta > 0 only)
    std::vector<Eigen::Index> zero_d_branches;   // low-loss indices with d_j = 0
};

AsymptoticModel expansion_coefficients(const LagrangianSystem& sys);

/// Eigenvalue branches tracked continuously over a beta grid by maximal
/// eigenvector overlap between adjacent points.
struct SweepResult {
    Eigen::VectorXd beta_grid;
    std::vector<std::vector<Mode>> branches;  // branches[b][k]: branch b at beta_grid[k]
    Eigen::VectorXd continuity_score;         // per branch: min adjacent overlap
};

SweepResult sweep(const LagrangianSystem& sys, const Eigen::VectorXd& beta_grid);

/// Log-spaced grid, endpoints included.
Eigen::VectorXd log_grid(double beta_min, double beta_max, int points);

/// Fitted decay order of one branch's deviation from the asymptotic model.
struct BranchResidual {
    Eigen::Index branch = 0;
    ModeClass klass = ModeClass::Unclassified;
    Eigen::Index coefficient = 0;    // index into the model's coefficient list
    double re_exponent = 0;          // decay order of |Re zeta - rho|
    double damping_exponent = 0;     // decay order of the damping deviation
    double re_beta_inv_coeff = 0;    // fitted beta^{-1} coefficient of Re zeta
    bool re_pass = false;
    bool damping_pass = false;
    bool q_unbounded = false;        // d_j = 0 branch, Q-limit reported separately
};

struct ResidualTable {
    std::vector<BranchResidual> rows;
    bool all_pass() const;
};

/// Fits the empirical decay exponents of each branch against the model over
/// the signal-dominated top of the grid and checks them against the expected
/// orders (Re: 2, high-loss damping: 1, low-loss damping: 3).
/// Throws InsufficientRange when the grid stops below 1e3 * max(1, 2 w/b).
ResidualTable asymptotic_residuals(const SweepResult& sweep_result, const AsymptoticModel& model,
                                   const LagrangianSystem& sys);

}  // namespace gyro
