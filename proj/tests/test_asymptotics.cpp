#include <doctest.h>

#include <random>

#include "gyro/asymptotics.hpp"
#include "helpers.hpp"

using namespace gyro;
using Complex = std::complex<double>;

TEST_CASE("expansion_coefficients: circuit values") {
    testing::CircuitOracle oracle;
    AsymptoticModel model = expansion_coefficients(testing::circuit_system());

    REQUIRE(model.b_coeffs.size() == 1);
    CHECK(model.b_coeffs(0) == doctest::Approx(20.0).epsilon(1e-12));

    REQUIRE(model.rho_lowloss.size() == 3);
    CHECK(model.rho_lowloss(0) == doctest::Approx(-oracle.rho3).epsilon(1e-10));
    CHECK(std::abs(model.rho_lowloss(1)) < 1e-12);
    CHECK(model.rho_lowloss(2) == doctest::Approx(oracle.rho3).epsilon(1e-10));

    // d for the high-Q pair: G^2/(2 l L1) + C1 / (2 l (C1+C12) C12) = 0.03575
    CHECK(oracle.d34 == doctest::Approx(0.035750).epsilon(1e-12));
    CHECK(model.d_coeffs(0) == doctest::Approx(oracle.d34).epsilon(1e-10));
    CHECK(model.d_coeffs(2) == doctest::Approx(oracle.d34).epsilon(1e-10));

    // the kernel branch damping slope coincides with the dual slope 7/1000
    REQUIRE(model.dual_slopes.has_value());
    REQUIRE(model.dual_slopes->size() == 1);
    CHECK((*model.dual_slopes)(0) == doctest::Approx(0.007).epsilon(1e-12));
    CHECK(model.d_coeffs(1) == doctest::Approx(0.007).epsilon(1e-10));
    CHECK(model.zero_d_branches.empty());
}

TEST_CASE("expansion_coefficients: Omega = 0 degenerate case") {
    LagrangianSystem sys;
    sys.alpha = 2.0 * Eigen::MatrixXd::Identity(3, 3);
    sys.eta = Eigen::MatrixXd::Zero(3, 3);
    sys.theta = Eigen::MatrixXd::Zero(3, 3);
    sys.r = 2.0 * Eigen::MatrixXd::Identity(3, 3);  // B2 = identity
    AsymptoticModel model = expansion_coefficients(sys);
    CHECK(model.b_coeffs.size() == 3);
    for (Eigen::Index i = 0; i < 3; ++i) CHECK(model.b_coeffs(i) == doctest::Approx(1.0));
    CHECK(model.rho_lowloss.cwiseAbs().maxCoeff() < 1e-14);
    CHECK(model.d_coeffs.cwiseAbs().maxCoeff() < 1e-14);
    CHECK(model.zero_d_branches.size() == 3);
}

TEST_CASE("log_grid endpoints and monotonicity") {
    Eigen::VectorXd g = log_grid(0.01, 100.0, 41);
    CHECK(g.size() == 41);
    CHECK(g(0) == doctest::Approx(0.01));
    CHECK(g(40) == 100.0);
    for (int i = 1; i < 41; ++i) CHECK(g(i) > g(i - 1));
    CHECK_THROWS_AS(log_grid(-1.0, 2.0, 5), ValidationError);
}

TEST_CASE("sweep: spring-mass-damper branches cross the overdamping point") {
    LagrangianSystem sys = testing::spring_mass_damper();
    Eigen::VectorXd grid = log_grid(0.5, 8.0, 120);
    SweepResult sw = sweep(sys, grid);
    REQUIRE(sw.branches.size() == 2);
    for (const auto& branch : sw.branches) CHECK(branch.size() == 120u);
    CHECK(sw.continuity_score.minCoeff() > 0.5);

    // beyond beta' = 2 both branches are purely imaginary; each grid value
    // matches the closed form (as a set over j = 1, 2)
    for (int k = 0; k < 120; ++k) {
        double beta = grid(k);
        std::vector<Complex> got = {sw.branches[0][static_cast<size_t>(k)].zeta,
                                    sw.branches[1][static_cast<size_t>(k)].zeta};
        std::vector<Complex> expected = {testing::smd_zeta(1, 1, 1, beta, 1),
                                         testing::smd_zeta(1, 1, 1, beta, 2)};
        CHECK(spectral_set_distance(got, expected) < 1e-9);
        if (beta > 2.0 + 1e-6)
            for (const auto& z : got) CHECK(z.real() == 0.0);
    }
}

TEST_CASE("sweep: circuit high-loss branch has damping slope b1") {
    LagrangianSystem sys = testing::circuit_system();
    SweepResult sw = sweep(sys, log_grid(0.01, 100.0, 400));
    REQUIRE(sw.branches.size() == 4);
    // the branch with the largest terminal damping is the high-loss one
    size_t hl = 0;
    double best = -1;
    for (size_t b = 0; b < 4; ++b) {
        double damping = sw.branches[b].back().damping();
        if (damping > best) {
            best = damping;
            hl = b;
        }
    }
    double slope = sw.branches[hl].back().damping() / sw.beta_grid(sw.beta_grid.size() - 1);
    CHECK(slope == doctest::Approx(20.0).epsilon(1e-3));
}

TEST_CASE("sweep: gyroscopic identity system matches the closed form pointwise") {
    LagrangianSystem sys = testing::nodex_system(2, 1.0);
    Eigen::VectorXd grid = log_grid(0.1, 50.0, 200);
    SweepResult sw = sweep(sys, grid);
    for (int k = 0; k < grid.size(); ++k) {
        std::vector<Complex> got;
        for (const auto& branch : sw.branches) got.push_back(branch[static_cast<size_t>(k)].zeta);
        std::vector<Complex> expected;
        for (double lambda : {1.0, -1.0})
            for (int sign : {+1, -1})
                expected.push_back(testing::nodex_zeta(lambda, grid(k), sign));
        CHECK(spectral_set_distance(got, expected) < 1e-9);
    }
}

TEST_CASE("sweep rejects bad grids") {
    LagrangianSystem sys = testing::circuit_system();
    Eigen::VectorXd bad(3);
    bad << 1.0, 0.5, 2.0;
    CHECK_THROWS_AS(sweep(sys, bad), ValidationError);
}

TEST_CASE("asymptotic_residuals: circuit decay orders") {
    LagrangianSystem sys = testing::circuit_system();
    AsymptoticModel model = expansion_coefficients(sys);
    SweepResult sw = sweep(sys, log_grid(1e2, 1e4, 250));
    ResidualTable table = asymptotic_residuals(sw, model, sys);
    REQUIRE(table.rows.size() == 4);
    CHECK(table.all_pass());
    int hq_seen = 0;
    for (const auto& row : table.rows) {
        CHECK(row.re_pass);
        CHECK(row.damping_pass);
        if (row.klass == ModeClass::LowLossHighQ) {
            ++hq_seen;
            // Re zeta -> rho at order >= 1.8 measured
            CHECK(row.re_exponent >= 1.8);
            // frequency parity: the beta^{-1} coefficient is tiny
            CHECK(std::abs(row.re_beta_inv_coeff) <=
                  1e-6 * std::abs(model.rho_lowloss(row.coefficient)) + 1e-9);
        }
    }
    CHECK(hq_seen == 2);
}

TEST_CASE("asymptotic_residuals: dual slope limit at beta = 1e4") {
    LagrangianSystem sys = testing::circuit_system();
    SweepResult sw = sweep(sys, log_grid(1e2, 1e4, 120));
    // kernel branch: the one with smallest |zeta| at the top
    size_t ll0 = 0;
    double best = 1e300;
    for (size_t b = 0; b < sw.branches.size(); ++b) {
        double mag = std::abs(sw.branches[b].back().zeta);
        if (mag < best) {
            best = mag;
            ll0 = b;
        }
    }
    double limit = sw.branches[ll0].back().damping() * 1e4;
    CHECK(limit == doctest::Approx(0.007).epsilon(1e-4));
}

TEST_CASE("asymptotic_residuals: InsufficientRange on short sweeps") {
    LagrangianSystem sys = testing::circuit_system();
    AsymptoticModel model = expansion_coefficients(sys);
    SweepResult sw = sweep(sys, log_grid(0.1, 10.0, 40));
    CHECK_THROWS_WITH_AS(asymptotic_residuals(sw, model, sys),
                         doctest::Contains("InsufficientRange"), ValidationError);
}

TEST_CASE("nodex high-loss branches approach Re zeta = -2 lambda (no overdamping)") {
    LagrangianSystem sys = testing::nodex_system(2, 1.0);
    std::vector<Mode> modes = spectrum(sys, 1e4);
    // the two high-loss modes have huge damping and frequencies near -2 lambda
    std::vector<double> hl_freqs;
    for (const auto& m : modes)
        if (m.damping() > 100.0) hl_freqs.push_back(m.frequency());
    REQUIRE(hl_freqs.size() == 2);
    std::sort(hl_freqs.begin(), hl_freqs.end());
    CHECK(hl_freqs[0] == doctest::Approx(-2.0).epsilon(1e-3));
    CHECK(hl_freqs[1] == doctest::Approx(2.0).epsilon(1e-3));
    for (double f : hl_freqs) CHECK(f != 0.0);
}

TEST_CASE("large-beta splitting: N_R escaping branches, the rest near sigma(Omega_1)") {
    std::mt19937_64 rng(127);
    for (int trial = 0; trial < 6; ++trial) {
        int n = 2 + static_cast<int>(rng() % 4);
        int n_r = 1 + static_cast<int>(rng() % (n - 1));
        LagrangianSystem sys = testing::random_system(rng, n, n_r, true);
        DichotomyReport rep = characteristic_scalars(sys);
        LimitingFrequencies lf = limiting_frequencies(sys);
        const double beta = 1e5 * std::max(1.0, rep.split_threshold());

        int escaping = 0, near_zero = 0, near_nonzero = 0;
        const double rho_scale = std::max(1.0, lf.omega1_spectrum.cwiseAbs().maxCoeff());
        for (const Mode& m : spectrum(sys, beta)) {
            if (std::abs(m.zeta) > rep.omega_max) {
                ++escaping;
                continue;
            }
            // low-loss branches approach an eigenvalue of Omega_1
            double dist = 1e300;
            for (Eigen::Index i = 0; i < lf.omega1_spectrum.size(); ++i)
                dist = std::min(dist, std::abs(m.zeta - lf.omega1_spectrum(i)));
            CHECK(dist < 1e-3 * rho_scale);
            if (std::abs(m.zeta) < 1e-3 * rho_scale)
                ++near_zero;
            else
                ++near_nonzero;
        }
        CHECK(escaping == n_r);
        // Ker r and Ker eta meet trivially (eta > 0), so the indexing splits
        CHECK(near_zero == n_r);
        CHECK(near_nonzero == 2 * (n - n_r));
    }
}

TEST_CASE("dual-slope consistency: kernel-branch d coefficients equal 1/b_dual") {
    std::mt19937_64 rng(131);
    for (int trial = 0; trial < 8; ++trial) {
        int n = 2 + static_cast<int>(rng() % 4);
        int n_r = 1 + static_cast<int>(rng() % (n - 1));
        LagrangianSystem sys = testing::random_system(rng, n, n_r, true);
        AsymptoticModel model = expansion_coefficients(sys);
        REQUIRE(model.dual_slopes.has_value());

        // collect the d coefficients of the branches converging to rho = 0
        const double rho_scale = std::max(1.0, model.rho_lowloss.cwiseAbs().maxCoeff());
        std::vector<double> kernel_d;
        for (Eigen::Index i = 0; i < model.rho_lowloss.size(); ++i)
            if (std::abs(model.rho_lowloss(i)) < 1e-8 * rho_scale)
                kernel_d.push_back(model.d_coeffs(i));
        std::vector<double> slopes(model.dual_slopes->data(),
                                   model.dual_slopes->data() + model.dual_slopes->size());
        REQUIRE(kernel_d.size() == slopes.size());
        std::sort(kernel_d.begin(), kernel_d.end());
        std::sort(slopes.begin(), slopes.end());
        for (size_t k = 0; k < slopes.size(); ++k)
            CHECK(kernel_d[k] == doctest::Approx(slopes[k]).epsilon(1e-6));
    }
}

TEST_CASE("Q-factor limits over the top decade (monotone, thresholded)") {
    LagrangianSystem sys = testing::circuit_system();
    DichotomyReport rep = overdamping_thresholds(sys);
    SweepResult sw = sweep(sys, log_grid(1e3, 1e4, 60));
    std::vector<Mode> classified = spectrum(sys, 1e4);
    classify(rep, 1e4, classified);
    for (const auto& branch : sw.branches) {
        // class of the terminal mode, matched by eigenvalue
        ModeClass klass = ModeClass::Unclassified;
        double bestd = 1e300;
        for (const auto& m : classified) {
            double dist = std::abs(m.zeta - branch.back().zeta);
            if (dist < bestd) {
                bestd = dist;
                klass = m.klass;
            }
        }
        double q_end = branch.back().q();
        bool increasing = true, decreasing = true;
        for (size_t k = 1; k < branch.size(); ++k) {
            double q0 = branch[k - 1].q(), q1 = branch[k].q();
            if (q1 < q0) increasing = false;
            if (q1 > q0) decreasing = false;
        }
        if (klass == ModeClass::LowLossHighQ) {
            CHECK(increasing);
            CHECK(q_end > 100.0);
        } else {
            CHECK(decreasing);
            CHECK(q_end < 0.01);
        }
    }
}
