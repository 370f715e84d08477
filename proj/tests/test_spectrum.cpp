#include <doctest.h>

#include <random>

#include "gyro/spectrum.hpp"
#include "helpers.hpp"

using namespace gyro;
using Complex = std::complex<double>;

namespace {

std::vector<Complex> zetas_of(const std::vector<Mode>& modes) {
    std::vector<Complex> z;
    for (const auto& m : modes) z.push_back(m.zeta);
    return z;
}

}  // namespace

TEST_CASE("spectrum: circuit at beta = 0 is the two conservative frequency pairs") {
    testing::CircuitOracle oracle;
    std::vector<Mode> modes = spectrum(testing::circuit_system(), 0.0);
    REQUIRE(modes.size() == 4);
    std::vector<Complex> expected = {oracle.omega_max, oracle.omega_min, -oracle.omega_min,
                                     -oracle.omega_max};
    CHECK(spectral_set_distance(zetas_of(modes), expected) < 1e-10);
    for (const auto& m : modes) CHECK(std::abs(m.damping()) < 1e-12);
}

TEST_CASE("spectrum: gyroscopic identity system matches the closed form") {
    // two rotation-coupled degrees of freedom, i*theta spectrum {1, -1}
    LagrangianSystem sys = testing::nodex_system(2, 1.0);
    for (double beta : {0.5, 1.0, 2.0}) {
        std::vector<Mode> modes = spectrum(sys, beta);
        std::vector<Complex> expected;
        for (double lambda : {1.0, -1.0})
            for (int sign : {+1, -1}) expected.push_back(testing::nodex_zeta(lambda, beta, sign));
        CHECK(spectral_set_distance(zetas_of(modes), expected) < 1e-10);
    }
}

TEST_CASE("spectrum: spring-mass-damper closed form, overdamped beyond beta' = 2") {
    LagrangianSystem sys = testing::spring_mass_damper();
    std::vector<Mode> modes = spectrum(sys, 3.0);
    const double s5 = std::sqrt(5.0);
    std::vector<Complex> expected = {Complex(0, -(3 + s5) / 2), Complex(0, -(3 - s5) / 2)};
    CHECK(spectral_set_distance(zetas_of(modes), expected) < 1e-10);
    for (const auto& m : modes) CHECK(m.frequency() == 0.0);  // exact with the real solver
}

TEST_CASE("q_factor conventions") {
    CHECK(q_factor(Complex(1, -1)) == doctest::Approx(0.5));
    CHECK(q_factor(Complex(0, -2)) == 0.0);
    CHECK(std::isinf(q_factor(Complex(3, 0))));
    CHECK(q_factor(Complex(0, 0)) == 0.0);
    CHECK_THROWS_WITH_AS(q_factor(Complex(1.0, 0.5)), doctest::Contains("GrowingMode"),
                         NumericalError);
}

TEST_CASE("q_factor duality: Q(-1/zeta) = Q(zeta)") {
    std::mt19937_64 rng(61);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 50; ++trial) {
        Complex zeta(gauss(rng), -std::abs(gauss(rng)));
        if (std::abs(zeta) < 1e-6) continue;
        double q1 = q_factor(zeta);
        double q2 = q_factor(-1.0 / zeta);
        if (std::isinf(q1))
            CHECK(std::isinf(q2));
        else
            CHECK(q1 == doctest::Approx(q2).epsilon(1e-12));
    }
}

TEST_CASE("characteristic_scalars: circuit values against the closed forms") {
    testing::CircuitOracle oracle;
    DichotomyReport rep = characteristic_scalars(testing::circuit_system());
    CHECK(rep.omega_max == doctest::Approx(oracle.omega_max).epsilon(1e-12));
    CHECK(rep.omega_min == doctest::Approx(oracle.omega_min).epsilon(1e-12));
    CHECK(rep.b_min == doctest::Approx(20.0).epsilon(1e-12));
    REQUIRE(rep.b_min_dual.has_value());
    CHECK(*rep.b_min_dual == doctest::Approx(1000.0 / 7.0).epsilon(1e-12));
    REQUIRE(rep.omega_max_dual.has_value());
    CHECK(*rep.omega_max_dual == doctest::Approx(1.0 / oracle.omega_min).epsilon(1e-12));
    CHECK(rep.split_threshold() == doctest::Approx(testing::kBeta0Printed).epsilon(1e-8));
}

TEST_CASE("characteristic_scalars: dual scalars equal the scalars of the dual system") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 6; ++trial) {
        int n = 1 + static_cast<int>(rng() % 5);
        LagrangianSystem sys = testing::random_system(rng, n, 1 + static_cast<int>(rng() % n),
                                                      true);
        DichotomyReport rep = characteristic_scalars(sys);
        DichotomyReport drep = characteristic_scalars(dual(sys));
        REQUIRE(rep.omega_max_dual.has_value());
        CHECK(drep.omega_max == doctest::Approx(*rep.omega_max_dual).epsilon(1e-9));
        CHECK(drep.b_min == doctest::Approx(*rep.b_min_dual).epsilon(1e-9));
        CHECK(*rep.omega_max_dual == doctest::Approx(1.0 / rep.omega_min).epsilon(1e-12));
    }
}

TEST_CASE("characteristic_scalars: ZeroOmega when theta = 0 and eta = 0") {
    LagrangianSystem sys;
    sys.alpha = Eigen::MatrixXd::Identity(2, 2);
    sys.eta = Eigen::MatrixXd::Zero(2, 2);
    sys.theta = Eigen::MatrixXd::Zero(2, 2);
    sys.r = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_WITH_AS(characteristic_scalars(sys), doctest::Contains("ZeroOmega"),
                         ValidationError);
}

TEST_CASE("limiting_frequencies: circuit Omega_1 spectrum {-rho3, 0, rho3}") {
    testing::CircuitOracle oracle;
    LimitingFrequencies lf = limiting_frequencies(testing::circuit_system());
    REQUIRE(lf.omega1_spectrum.size() == 3);
    CHECK(lf.omega1_spectrum(0) == doctest::Approx(-oracle.rho3).epsilon(1e-12));
    CHECK(std::abs(lf.omega1_spectrum(1)) < 1e-12);
    CHECK(lf.omega1_spectrum(2) == doctest::Approx(oracle.rho3).epsilon(1e-12));
    CHECK(lf.zero_multiplicity == 1);  // = N_R since Ker r and Ker eta meet trivially
    CHECK(lf.rho_min == doctest::Approx(oracle.rho3).epsilon(1e-12));
    CHECK(lf.rho_max == doctest::Approx(oracle.rho3).epsilon(1e-12));
    CHECK(oracle.rho3 == doctest::Approx(std::sqrt(0.016)).epsilon(1e-15));
    REQUIRE(lf.rho_min_dual.has_value());
    CHECK(*lf.rho_min_dual == doctest::Approx(1.0 / oracle.rho3).epsilon(1e-12));

    CHECK_THROWS_WITH_AS(limiting_frequencies(testing::spring_mass_damper()),
                         doctest::Contains("FullRankDissipation"), ValidationError);
}

TEST_CASE("limiting_frequencies: determinant identity for Omega_1") {
    // det(rho - Omega_1) = rho^{N_R} det[P C(rho,0) P|Ker] / det[P alpha P|Ker]
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
        int n = 2 + static_cast<int>(rng() % 4);
        int n_r = 1 + static_cast<int>(rng() % (n - 1));
        LagrangianSystem sys = testing::random_system(rng, n, n_r, trial % 2 == 0);
        CanonicalOperator canon = build_canonical(sys);
        LossDecomposition dec = loss_decomposition(canon);
        Eigen::MatrixXd ker_r = kernel_basis_real(sys.r);

        for (int k = 0; k < 10; ++k) {
            double rho = uni(rng);
            if (std::abs(rho) < 0.05) continue;
            Complex lhs = (rho * Eigen::MatrixXcd::Identity(dec.omega1.rows(), dec.omega1.rows()) -
                           dec.omega1)
                              .determinant();
            Complex c_red = restrict_to(pencil(sys, rho, 0.0), ker_r.cast<Complex>()).determinant();
            Complex a_red = restrict_to_real(sys.alpha, ker_r).cast<Complex>().determinant();
            Complex rhs = std::pow(Complex(rho), n_r) * c_red / a_red;
            CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max({std::abs(lhs), std::abs(rhs), 1.0}));
        }
    }
}

TEST_CASE("overdamping_thresholds: circuit beta0, beta1, beta2") {
    testing::CircuitOracle oracle;
    DichotomyReport rep = overdamping_thresholds(testing::circuit_system());
    REQUIRE(rep.beta0.has_value());
    REQUIRE(rep.beta1.has_value());
    REQUIRE(rep.beta2.has_value());
    CHECK(rep.generic);
    REQUIRE(rep.generic_dual.has_value());
    CHECK(*rep.generic_dual);

    // against the closed forms
    CHECK(*rep.beta0 == doctest::Approx(oracle.beta0).epsilon(1e-12));
    CHECK(*rep.beta1 == doctest::Approx(oracle.beta1).epsilon(1e-12));
    CHECK(*rep.beta2 == doctest::Approx(oracle.beta2).epsilon(1e-12));
    // against the quoted decimals
    CHECK(*rep.beta0 == doctest::Approx(testing::kBeta0Printed).epsilon(1e-8));
    CHECK(*rep.beta1 == doctest::Approx(testing::kBeta1Printed).epsilon(1e-8));
    CHECK(*rep.beta2 == doctest::Approx(testing::kBeta2Printed).epsilon(1e-8));
    // beta2 realizes the primary branch c^{-1}(rho_min / 2)
    REQUIRE(rep.rho_min.has_value());
    CHECK(*rep.beta2 == doctest::Approx(rep.c_inv(*rep.rho_min / 2.0)).epsilon(1e-12));
    // c and c_inv are inverse on (0, 10 omega_max]
    for (double y : {0.01, 0.1, 1.0, 10.0 * rep.omega_max})
        CHECK(rep.c(rep.c_inv(y)) == doctest::Approx(y).epsilon(1e-12));
}

TEST_CASE("overdamping_thresholds: 1-dof system has no beta2 and beta0 = 2 w / b") {
    DichotomyReport rep = overdamping_thresholds(testing::spring_mass_damper());
    REQUIRE(rep.beta0.has_value());
    CHECK(*rep.beta0 == doctest::Approx(2.0));  // 2 sqrt(km)/r with m=k=r=1
    CHECK_FALSE(rep.beta2.has_value());
    CHECK(rep.d_gap == doctest::Approx(rep.b_min));
}

TEST_CASE("overdamping_thresholds: nongeneric system reports generic = false, no beta0") {
    LagrangianSystem sys = testing::nodex_system(2, 1.0);  // b_1 = b_2 = 1
    DichotomyReport rep = overdamping_thresholds(sys);
    CHECK_FALSE(rep.generic);
    CHECK_FALSE(rep.beta0.has_value());
}

TEST_CASE("classify: circuit at beta = 10 gives counts (1, 1, 2)") {
    LagrangianSystem sys = testing::circuit_system();
    std::vector<Mode> modes = classify(sys, 10.0, spectrum(sys, 10.0));
    int hl = 0, ll0 = 0, ll1 = 0;
    for (const auto& m : modes) {
        if (m.klass == ModeClass::HighLoss) ++hl;
        if (m.klass == ModeClass::LowLossLowQ) ++ll0;
        if (m.klass == ModeClass::LowLossHighQ) ++ll1;
        if (m.klass == ModeClass::HighLoss || m.klass == ModeClass::LowLossLowQ)
            CHECK(std::abs(m.frequency()) < 1e-9);  // overdamped beyond beta1
        if (m.klass == ModeClass::LowLossHighQ) CHECK(m.q() > 0.5);
    }
    CHECK(hl == 1);
    CHECK(ll0 == 1);
    CHECK(ll1 == 2);
}

TEST_CASE("classify: below threshold everything stays unclassified") {
    LagrangianSystem sys = testing::circuit_system();
    std::vector<Mode> modes = classify(sys, 0.05, spectrum(sys, 0.05));
    for (const auto& m : modes) CHECK(m.klass == ModeClass::Unclassified);
}

TEST_CASE("identity_suite: random systems have small residuals") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 1 + static_cast<int>(rng() % 6);
        int n_r = 1 + static_cast<int>(rng() % n);
        LagrangianSystem sys = testing::random_system(rng, n, n_r, trial % 2 == 0);
        IdentityReport rep = identity_suite(sys, 1.0);
        CHECK(rep.worst() <= 1e-8);
        if (trial % 2 == 0) CHECK(rep.duality.has_value());
    }
}

TEST_CASE("identity_suite: beta = 0 spectrum is real; circuit duality at beta = 5") {
    IdentityReport rep = identity_suite(testing::circuit_system(), 0.0);
    CHECK(rep.symmetry <= 1e-10);
    for (const Mode& m : spectrum(testing::circuit_system(), 0.0))
        CHECK(std::abs(m.zeta.imag()) < 1e-10);

    IdentityReport rep5 = identity_suite(testing::circuit_system(), 5.0);
    REQUIRE(rep5.duality.has_value());
    CHECK(*rep5.duality <= 1e-8);
}

TEST_CASE("disc containment and Rayleigh quotients on random systems") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 1 + static_cast<int>(rng() % 5);
        LagrangianSystem sys = testing::random_system(rng, n, 1 + static_cast<int>(rng() % n),
                                                      true);
        for (double beta : {0.0, 1.0, 10.0}) {
            IdentityReport rep = identity_suite(sys, beta);
            CHECK(rep.disc_excess <= 1e-8);
            CHECK(rep.rayleigh_re <= 1e-8);
            CHECK(rep.rayleigh_im <= 1e-8);
        }
    }
}

TEST_CASE("band counts hold for all beta above the dual threshold") {
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + static_cast<int>(rng() % 4);
        int n_r = 1 + static_cast<int>(rng() % n);
        LagrangianSystem sys = testing::random_system(rng, n, n_r, true);
        DichotomyReport rep = overdamping_thresholds(sys);
        auto thr = rep.dual_split_threshold();
        REQUIRE(thr.has_value());
        for (double factor : {1.2, 3.0, 20.0}) {
            double beta = *thr * factor;
            std::vector<Mode> modes = spectrum(sys, beta);
            classify(rep, beta, modes);  // throws CountMismatch on failure
            Eigen::Index hl = 0, ll0 = 0, ll1 = 0;
            for (const auto& m : modes) {
                if (m.klass == ModeClass::HighLoss) ++hl;
                if (m.klass == ModeClass::LowLossLowQ) ++ll0;
                if (m.klass == ModeClass::LowLossHighQ) ++ll1;
            }
            CHECK(hl == n_r);
            CHECK(ll0 == n_r);
            CHECK(ll1 == 2 * (n - n_r));
        }
    }
}

TEST_CASE("Q-factor bounds from the dichotomy corollaries") {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 8; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3);
        int n_r = 1 + static_cast<int>(rng() % (n - 1));
        LagrangianSystem sys = testing::random_system(rng, n, n_r, true);
        DichotomyReport rep = overdamping_thresholds(sys);
        auto thr = rep.dual_split_threshold();
        REQUIRE(thr.has_value());
        double beta = *thr * 2.0;
        std::vector<Mode> modes = spectrum(sys, beta);
        classify(rep, beta, modes);
        const double hl_bound =
            0.5 * rep.omega_max / (beta * rep.b_min - rep.omega_max);
        const double ll0_q_bound = 0.5 * *rep.omega_max_dual /
                                   (beta * *rep.b_min_dual - *rep.omega_max_dual);
        const double ll0_mag_bound = 1.0 / (beta * *rep.b_min_dual - *rep.omega_max_dual);
        for (const auto& m : modes) {
            if (m.klass == ModeClass::HighLoss) {
                CHECK(m.q() <= hl_bound + 1e-9);
                CHECK(hl_bound < 0.5);
            }
            if (m.klass == ModeClass::LowLossLowQ) {
                CHECK(m.q() <= ll0_q_bound + 1e-9);
                CHECK(std::abs(m.zeta) <= ll0_mag_bound + 1e-9);
                CHECK(ll0_mag_bound < rep.omega_min);
            }
        }

        // refined low-loss bounds beyond c^{-1}(rho_min / 2)
        if (rep.rho_min && rep.beta2) {
            double beta2 = std::max(*rep.beta2, *thr) * 1.5;
            std::vector<Mode> modes2 = spectrum(sys, beta2);
            classify(rep, beta2, modes2);
            const double c_val = rep.c(beta2);
            for (const auto& m : modes2) {
                if (m.klass == ModeClass::LowLossHighQ) {
                    CHECK(m.q() > 0.5);
                    CHECK(m.damping() <= c_val + 1e-9);
                    CHECK(std::abs(m.frequency()) >= *rep.rho_min - c_val - 1e-9);
                    CHECK(m.frequency() != 0.0);
                }
                if (m.klass == ModeClass::LowLossLowQ) {
                    CHECK(std::abs(m.frequency()) <= c_val + 1e-9);
                    CHECK(m.damping() <= c_val + 1e-9);
                }
            }
        }
    }
}

TEST_CASE("overdamping onset: generic systems have exact zero frequencies beyond beta0/beta1") {
    std::mt19937_64 rng(89);
    for (int trial = 0; trial < 8; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3);
        int n_r = 1 + static_cast<int>(rng() % (n - 1));
        LagrangianSystem sys = testing::random_system(rng, n, n_r, true);
        DichotomyReport rep = overdamping_thresholds(sys);
        if (!rep.generic || !rep.beta1 || !(rep.generic_dual && *rep.generic_dual)) continue;
        for (double factor : {1.05, 2.0, 10.0}) {
            double beta = *rep.beta1 * factor;
            std::vector<Mode> modes = spectrum(sys, beta);
            classify(rep, beta, modes);
            for (const auto& m : modes) {
                if (m.klass == ModeClass::HighLoss || m.klass == ModeClass::LowLossLowQ)
                    CHECK(std::abs(m.frequency()) < 1e-9 * std::max(1.0, std::abs(m.zeta)));
            }
        }
    }
}

TEST_CASE("complete overdamping for non-gyroscopic full-rank dissipation") {
    std::mt19937_64 rng(97);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 1 + static_cast<int>(rng() % 4);
        LagrangianSystem sys = testing::random_system(rng, n, n, true, /*gyroscopic=*/false);
        DichotomyReport rep = characteristic_scalars(sys);
        double beta = 2.01 * rep.omega_max / rep.b_min;
        for (const Mode& m : spectrum(sys, beta))
            CHECK(std::abs(m.frequency()) < 1e-9 * std::max(1.0, std::abs(m.zeta)));
    }
}
