#include "gyro/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gyro {

namespace {

constexpr double kGenericGapTol = 1e-8;  // relative gap below which eigenvalues coalesce

/// Nonzero eigenvalues of a PSD matrix, ascending; the zero part is dropped
/// at tol_rank relative to the largest eigenvalue.
Eigen::VectorXd nonzero_psd_spectrum(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s((m + m.transpose()) / 2.0,
                                                     Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = s.eigenvalues();
    const double max_ev = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
    std::vector<double> keep;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > Tolerances{}.rank * std::max(max_ev, 1e-300)) keep.push_back(ev(i));
    return Eigen::Map<Eigen::VectorXd>(keep.data(), static_cast<Eigen::Index>(keep.size()));
}

/// min_{0 <= i < j} |b_i - b_j| over {0} union bs (ascending bs > 0).
double min_gap_with_zero(const Eigen::VectorXd& bs) {
    double d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < bs.size(); ++i) {
        d = std::min(d, bs(i));  // |b_i - 0|
        if (i + 1 < bs.size()) d = std::min(d, bs(i + 1) - bs(i));
    }
    return d;
}

bool simple_nonzero(const Eigen::VectorXd& bs) {
    const double scale = bs.size() ? bs(bs.size() - 1) : 0.0;
    for (Eigen::Index i = 0; i + 1 < bs.size(); ++i)
        if (bs(i + 1) - bs(i) <= kGenericGapTol * std::max(scale, 1e-300)) return false;
    return true;
}

void sort_modes(std::vector<Mode>& modes) {
    std::sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
        if (a.damping() != b.damping()) return a.damping() > b.damping();
        return a.frequency() < b.frequency();
    });
}

}  // namespace

const char* to_string(ModeClass k) {
    switch (k) {
        case ModeClass::HighLoss: return "HighLoss";
        case ModeClass::LowLossLowQ: return "LowLossLowQ";
        case ModeClass::LowLossHighQ: return "LowLossHighQ";
        default: return "Unclassified";
    }
}

double Mode::q() const { return q_factor(zeta); }

double q_factor(std::complex<double> zeta) {
    double omega = zeta.real();
    double gamma = -zeta.imag();
    const double grow_tol = 1e-8 * std::max(1.0, std::abs(zeta));
    if (gamma < -grow_tol)
        throw NumericalError("GrowingMode",
                             "Im zeta > 0 violates the power dissipation condition");
    if (gamma <= 0.0) {
        if (omega == 0.0) return 0.0;
        return std::numeric_limits<double>::infinity();
    }
    return 0.5 * std::abs(omega) / gamma;
}

std::vector<Mode> spectrum(const LagrangianSystem& sys, double beta) {
    if (beta < 0) throw ValidationError("InvalidBeta", "beta must be nonnegative");
    CanonicalOperator canon = build_canonical(sys);
    // A(beta) = i G with G real; the real solver keeps overdamped eigenvalues
    // exactly on the imaginary axis and pairs the rest as exact conjugates.
    EigenDecomposition d = eig_general_real(canon.generator(beta));
    std::vector<Mode> modes(static_cast<size_t>(d.values.size()));
    const std::complex<double> i(0.0, 1.0);
    for (Eigen::Index k = 0; k < d.values.size(); ++k) {
        modes[static_cast<size_t>(k)].beta = beta;
        modes[static_cast<size_t>(k)].zeta = i * d.values(k);
        modes[static_cast<size_t>(k)].w = d.vectors.col(k);
    }
    sort_modes(modes);
    return modes;
}

double DichotomyReport::c(double beta) const {
    const double thr = split_threshold();
    if (beta <= thr)
        throw ValidationError("InvalidBeta", "c(beta) is defined for beta > 2 omega_max / b_min");
    return (2.0 * omega_max * omega_max / b_min) / (beta - thr);
}

double DichotomyReport::c_inv(double y) const {
    if (y <= 0) throw ValidationError("InvalidBeta", "c_inv is defined for y > 0");
    return (2.0 * omega_max * omega_max / b_min) / y + split_threshold();
}

std::optional<double> DichotomyReport::c_dual(double beta) const {
    if (!omega_max_dual || !b_min_dual) return std::nullopt;
    const double thr = 2.0 * *omega_max_dual / *b_min_dual;
    if (beta <= thr)
        throw ValidationError("InvalidBeta", "c_dual(beta) needs beta > 2 omega_max'/b_min'");
    return (2.0 * *omega_max_dual * *omega_max_dual / *b_min_dual) / (beta - thr);
}

std::optional<double> DichotomyReport::c_inv_dual(double y) const {
    if (!omega_max_dual || !b_min_dual) return std::nullopt;
    if (y <= 0) throw ValidationError("InvalidBeta", "c_inv_dual is defined for y > 0");
    return (2.0 * *omega_max_dual * *omega_max_dual / *b_min_dual) / y +
           2.0 * *omega_max_dual / *b_min_dual;
}

std::optional<double> DichotomyReport::dual_split_threshold() const {
    if (!omega_max_dual || !b_min_dual) return std::nullopt;
    return std::max(split_threshold(), 2.0 * *omega_max_dual / *b_min_dual);
}

DichotomyReport characteristic_scalars(const LagrangianSystem& sys) {
    ValidationReport vrep = validate(sys);
    CanonicalOperator canon = build_canonical(sys);

    DichotomyReport rep;
    rep.n = vrep.n;
    rep.n_r = vrep.n_r;
    rep.duality_ok = vrep.duality_ok;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> os(canon.omega, Eigen::EigenvaluesOnly);
    Eigen::VectorXd omega_ev = os.eigenvalues();
    rep.omega_max = omega_ev.cwiseAbs().maxCoeff();
    if (rep.omega_max <= 0.0)
        throw ValidationError("ZeroOmega", "Omega = 0 (theta = 0 and eta = 0)");
    double omega_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < omega_ev.size(); ++i)
        if (omega_ev(i) > Tolerances{}.rank * rep.omega_max)
            omega_min = std::min(omega_min, omega_ev(i));
    rep.omega_min = omega_min;

    Eigen::VectorXd bs = nonzero_psd_spectrum(canon.b.topLeftCorner(sys.dof(), sys.dof()));
    if (bs.size() == 0)
        throw ValidationError("RZero", "no dissipation: dichotomy scalars are undefined");
    rep.b_min = bs(0);
    rep.b_max = bs(bs.size() - 1);
    rep.d_gap = min_gap_with_zero(bs);
    rep.generic = simple_nonzero(bs);

    if (vrep.duality_ok) {
        rep.omega_max_dual = 1.0 / rep.omega_min;
        Eigen::MatrixXd se_inv = inverse_spd(sqrt_psd(sys.eta));
        Eigen::VectorXd bs_dual = nonzero_psd_spectrum(se_inv * sys.r * se_inv);
        rep.b_min_dual = bs_dual(0);
        rep.b_max_dual = bs_dual(bs_dual.size() - 1);
        rep.d_gap_dual = min_gap_with_zero(bs_dual);
        rep.generic_dual = simple_nonzero(bs_dual);
    }
    return rep;
}

LimitingFrequencies limiting_frequencies(const LagrangianSystem& sys) {
    ValidationReport vrep = validate(sys);
    if (vrep.n_r == vrep.n)
        throw ValidationError("FullRankDissipation",
                              "limiting frequencies need a lossless component (N_R < N)");
    CanonicalOperator canon = build_canonical(sys);
    LossDecomposition dec = loss_decomposition(canon);
    EigenDecomposition od = eig_hermitian(dec.omega1);

    LimitingFrequencies lf;
    lf.omega1_spectrum = od.values.real();
    const double scale = lf.omega1_spectrum.cwiseAbs().maxCoeff();
    double rho_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < lf.omega1_spectrum.size(); ++i) {
        double v = lf.omega1_spectrum(i);
        if (std::abs(v) <= Tolerances{}.rank * std::max(scale, 1e-300))
            ++lf.zero_multiplicity;
        else if (v > 0)
            rho_min = std::min(rho_min, v);
    }
    if (!std::isfinite(rho_min))
        throw NumericalError("NoPositiveLimit", "sigma(Omega_1) has no positive eigenvalue");
    lf.rho_min = rho_min;
    lf.rho_max = lf.omega1_spectrum(lf.omega1_spectrum.size() - 1);
    if (vrep.duality_ok) {
        lf.rho_min_dual = 1.0 / lf.rho_max;
        lf.rho_max_dual = 1.0 / lf.rho_min;
    }
    return lf;
}

DichotomyReport overdamping_thresholds(const LagrangianSystem& sys) {
    DichotomyReport rep = characteristic_scalars(sys);

    if (rep.n_r < rep.n) {
        LimitingFrequencies lf = limiting_frequencies(sys);
        rep.rho_min = lf.rho_min;
        rep.rho_max = lf.rho_max;
        rep.rho_min_dual = lf.rho_min_dual;
        rep.rho_max_dual = lf.rho_max_dual;
    }

    const double gap_floor = kGenericGapTol * std::max(rep.b_max, 1e-300);
    if (rep.d_gap > gap_floor) rep.beta0 = 2.0 * rep.omega_max / rep.d_gap;

    if (rep.duality_ok && rep.beta0 && rep.d_gap_dual) {
        const double dual_gap_floor = kGenericGapTol * std::max(*rep.b_max_dual, 1e-300);
        if (*rep.d_gap_dual > dual_gap_floor)
            rep.beta1 = std::max(*rep.beta0, 2.0 * *rep.omega_max_dual / *rep.d_gap_dual);
    }

    if (rep.duality_ok && rep.rho_min) {
        double primary = rep.c_inv(*rep.rho_min / 2.0);
        double dual_route = *rep.c_inv_dual(*rep.rho_min_dual / 2.0);
        rep.beta2 = std::max({std::min(primary, dual_route), rep.split_threshold(),
                              *rep.dual_split_threshold()});
    }
    return rep;
}

void classify(const DichotomyReport& rep, double beta, std::vector<Mode>& modes) {
    for (auto& m : modes) m.klass = ModeClass::Unclassified;
    auto dual_thr = rep.dual_split_threshold();
    const bool three_way = dual_thr && beta > *dual_thr;
    const bool two_way = beta > rep.split_threshold();
    if (!two_way) return;

    Eigen::Index hl = 0, ll0 = 0, ll1 = 0;
    for (auto& m : modes) {
        double mag = std::abs(m.zeta);
        if (mag > rep.omega_max) {
            m.klass = ModeClass::HighLoss;
            ++hl;
        } else if (three_way) {
            if (mag < rep.omega_min) {
                m.klass = ModeClass::LowLossLowQ;
                ++ll0;
            } else {
                m.klass = ModeClass::LowLossHighQ;
                ++ll1;
            }
        }
    }
    auto fail = [&](const std::string& what) {
        throw NumericalError("CountMismatch", what + " (got " + std::to_string(hl) + ", " +
                                                  std::to_string(ll0) + ", " +
                                                  std::to_string(ll1) + ")");
    };
    if (hl != rep.n_r) fail("high-loss band must hold N_R modes");
    if (three_way) {
        if (ll0 != rep.n_r) fail("low-loss/low-Q band must hold N_R modes");
        if (ll1 != 2 * (rep.n - rep.n_r)) fail("low-loss/high-Q band must hold 2N-2N_R modes");
    }
}

std::vector<Mode> classify(const LagrangianSystem& sys, double beta, std::vector<Mode> modes) {
    classify(overdamping_thresholds(sys), beta, modes);
    return modes;
}

double spectral_set_distance(std::vector<std::complex<double>> a,
                             std::vector<std::complex<double>> b) {
    if (a.size() != b.size())
        throw ValidationError("DimensionMismatch", "spectral sets differ in cardinality");
    std::sort(a.begin(), a.end(), [](auto x, auto y) { return std::abs(x) > std::abs(y); });
    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (const auto& z : a) {
        double best = std::numeric_limits<double>::infinity();
        size_t best_j = 0;
        for (size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            double dist = std::abs(z - b[j]);
            if (dist < best) {
                best = dist;
                best_j = j;
            }
        }
        used[best_j] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

IdentityReport identity_suite(const LagrangianSystem& sys, double beta) {
    CanonicalOperator canon = build_canonical(sys);
    std::vector<Mode> modes = spectrum(sys, beta);
    std::vector<std::complex<double>> zetas, reflected;
    for (const auto& m : modes) {
        zetas.push_back(m.zeta);
        reflected.push_back(-std::conj(m.zeta));
    }
    double scale = 1.0;
    for (const auto& z : zetas) scale = std::max(scale, std::abs(z));

    IdentityReport rep;
    rep.symmetry = spectral_set_distance(zetas, reflected) / scale;

    ValidationReport vrep = validate(sys);
    if (vrep.duality_ok) {
        std::vector<Mode> dual_modes = spectrum(dual(sys), beta);
        std::vector<std::complex<double>> dual_mapped;
        for (const auto& m : dual_modes) dual_mapped.push_back(-1.0 / m.zeta);
        rep.duality = spectral_set_distance(zetas, dual_mapped) / scale;
    }

    Eigen::VectorXd bs = nonzero_psd_spectrum(canon.b.topLeftCorner(sys.dof(), sys.dof()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> os(canon.omega, Eigen::EigenvaluesOnly);
    const double omega_max = os.eigenvalues().cwiseAbs().maxCoeff();
    const std::complex<double> i(0.0, 1.0);
    double disc_scale = std::max(1.0, omega_max + beta * (bs.size() ? bs(bs.size() - 1) : 0.0));
    for (const auto& z : zetas) {
        double nearest = std::abs(z);  // center -i beta b_0 = 0
        for (Eigen::Index k = 0; k < bs.size(); ++k)
            nearest = std::min(nearest, std::abs(z - (-i * beta * bs(k))));
        rep.disc_excess = std::max(rep.disc_excess, (nearest - omega_max) / disc_scale);
    }
    rep.disc_excess = std::max(rep.disc_excess, 0.0);

    for (const auto& m : modes) {
        std::complex<double> ww = m.w.dot(m.w);
        std::complex<double> omega_quot = m.w.dot(canon.omega * m.w) / ww;
        std::complex<double> b_quot = m.w.dot(canon.b.cast<std::complex<double>>() * m.w) / ww;
        double denom = std::max(1.0, std::abs(m.zeta));
        rep.rayleigh_re = std::max(rep.rayleigh_re,
                                   std::abs(m.zeta.real() - omega_quot.real()) / denom);
        rep.rayleigh_im = std::max(rep.rayleigh_im,
                                   std::abs(-m.zeta.imag() - beta * b_quot.real()) / denom);
    }
    return rep;
}

double IdentityReport::worst() const {
    double w = std::max({symmetry, disc_excess, rayleigh_re, rayleigh_im});
    if (duality) w = std::max(w, *duality);
    return w;
}

}  // namespace gyro
