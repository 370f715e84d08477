#include "gyro/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gyro {

namespace {

constexpr double kClusterTol = 1e-8;

struct Cluster {
    Eigen::Index begin;
    Eigen::Index end;  // half-open
};

std::vector<Cluster> clusters_of(const Eigen::VectorXd& sorted_values) {
    std::vector<Cluster> out;
    const double scale = sorted_values.size()
                             ? std::max(1.0, sorted_values.cwiseAbs().maxCoeff())
                             : 1.0;
    Eigen::Index begin = 0;
    for (Eigen::Index i = 1; i <= sorted_values.size(); ++i) {
        if (i == sorted_values.size() ||
            sorted_values(i) - sorted_values(i - 1) > kClusterTol * scale) {
            out.push_back({begin, i});
            begin = i;
        }
    }
    return out;
}

/// Diagonalizes `primary` (Hermitian) and, inside each repeated eigenspace,
/// rediagonalizes the restriction of `secondary` so both the eigenvalues and
/// the quadratic forms (w_j, secondary w_j) are basis independent.
void diag_with_degenerate_split(const Eigen::MatrixXcd& primary, const Eigen::MatrixXcd& secondary,
                                Eigen::VectorXd& values, Eigen::MatrixXcd& vectors,
                                Eigen::VectorXd& secondary_values) {
    EigenDecomposition d = eig_hermitian(primary);
    values = d.values.real();
    vectors = d.vectors;
    secondary_values.resize(values.size());
    for (const Cluster& c : clusters_of(values)) {
        const Eigen::Index m = c.end - c.begin;
        Eigen::MatrixXcd u = vectors.middleCols(c.begin, m);
        Eigen::MatrixXcd s = u.adjoint() * secondary * u;
        EigenDecomposition sd = eig_hermitian((s + s.adjoint()) / 2.0);
        vectors.middleCols(c.begin, m) = u * sd.vectors;
        secondary_values.segment(c.begin, m) = sd.values.real();
    }
}

struct FitResult {
    double exponent = std::numeric_limits<double>::infinity();
    bool measurable = false;
};

/// Log-log decay order of an error series. The flat tail where the series
/// sits in arithmetic noise is excluded: points are kept while they stay a
/// factor 30 above the series floor, stopping at the first dip below. A
/// series that is zero or noise throughout has no measurable decay and
/// reports exponent = +inf (the deviation is below double precision).
FitResult fit_decay_exponent(const std::vector<double>& betas, const std::vector<double>& errs) {
    double emin = std::numeric_limits<double>::infinity();
    for (double e : errs)
        if (e > 0 && e < emin) emin = e;
    FitResult fit;
    if (!std::isfinite(emin)) return fit;  // identically zero
    const double floor = 30.0 * emin;
    std::vector<double> x, y;
    for (size_t i = 0; i < errs.size(); ++i) {
        if (errs[i] <= floor) break;
        x.push_back(std::log(betas[i]));
        y.push_back(std::log(errs[i]));
    }
    if (x.size() < 4) return fit;  // nothing above noise to measure
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double n = static_cast<double>(x.size());
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.exponent = -slope;
    fit.measurable = true;
    return fit;
}

/// Least squares of f(beta) ~ c0 + c1/beta + c2/beta^2; returns c1.
double fit_beta_inv_coeff(const std::vector<double>& betas, const std::vector<double>& f) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(betas.size()), 3);
    Eigen::VectorXd b(static_cast<Eigen::Index>(betas.size()));
    for (size_t i = 0; i < betas.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        a(k, 0) = 1.0;
        a(k, 1) = 1.0 / betas[i];
        a(k, 2) = 1.0 / (betas[i] * betas[i]);
        b(k) = f[i];
    }
    Eigen::Vector3d c = a.colPivHouseholderQr().solve(b);
    return c(1);
}

}  // namespace

AsymptoticModel expansion_coefficients(const LagrangianSystem& sys) {
    CanonicalOperator canon = build_canonical(sys);
    LossDecomposition dec = loss_decomposition(canon);
    ValidationReport vrep = validate(sys);

    AsymptoticModel model;

    // High-loss class: diagonalize B2, split ties by the Omega2 restriction.
    {
        Eigen::MatrixXcd b2c = dec.b2.cast<std::complex<double>>();
        Eigen::VectorXd b_vals;
        Eigen::MatrixXcd b_vecs;
        Eigen::VectorXd rho;
        diag_with_degenerate_split(b2c, dec.omega2, b_vals, b_vecs, rho);
        model.b_coeffs = b_vals;
        model.rho_highloss = rho;
    }

    // Low-loss class: diagonalize Omega_1, split ties by Theta* B2^{-1} Theta.
    {
        Eigen::MatrixXcd b2_inv =
            inverse_spd(dec.b2).cast<std::complex<double>>();
        Eigen::MatrixXcd damping_form = dec.theta_block.adjoint() * b2_inv * dec.theta_block;
        Eigen::VectorXd rho;
        Eigen::MatrixXcd vecs;
        Eigen::VectorXd d_vals;
        diag_with_degenerate_split(dec.omega1, damping_form, rho, vecs, d_vals);
        model.rho_lowloss = rho;
        model.d_coeffs = d_vals.cwiseMax(0.0);
        const double d_scale = std::max(model.d_coeffs.maxCoeff(), 1e-300);
        for (Eigen::Index j = 0; j < model.d_coeffs.size(); ++j)
            if (model.d_coeffs(j) <= 1e-12 * d_scale) model.zero_d_branches.push_back(j);
    }

    if (vrep.duality_ok) {
        Eigen::MatrixXd se_inv = inverse_spd(sqrt_psd(sys.eta));
        Eigen::MatrixXd r_dual = se_inv * sys.r * se_inv;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(r_dual, Eigen::EigenvaluesOnly);
        Eigen::VectorXd ev = s.eigenvalues();
        const double max_ev = ev.cwiseAbs().maxCoeff();
        std::vector<double> slopes;
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            if (ev(i) > Tolerances{}.rank * std::max(max_ev, 1e-300)) slopes.push_back(1.0 / ev(i));
        std::sort(slopes.begin(), slopes.end(), std::greater<>());  // aligned with b' ascending
        model.dual_slopes =
            Eigen::Map<Eigen::VectorXd>(slopes.data(), static_cast<Eigen::Index>(slopes.size()));
    }
    return model;
}

Eigen::VectorXd log_grid(double beta_min, double beta_max, int points) {
    if (beta_min <= 0 || beta_max < beta_min || points < 1)
        throw ValidationError("InvalidBeta", "log grid needs 0 < beta_min <= beta_max, points >= 1");
    if (points == 1 || beta_max == beta_min) {
        Eigen::VectorXd g(1);
        g(0) = beta_min;
        return g;
    }
    Eigen::VectorXd g(points);
    const double l0 = std::log(beta_min), l1 = std::log(beta_max);
    for (int i = 0; i < points; ++i)
        g(i) = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / (points - 1));
    g(points - 1) = beta_max;
    return g;
}

SweepResult sweep(const LagrangianSystem& sys, const Eigen::VectorXd& beta_grid) {
    if (beta_grid.size() == 0)
        throw ValidationError("InvalidBeta", "empty beta grid");
    for (Eigen::Index i = 0; i < beta_grid.size(); ++i) {
        if (beta_grid(i) <= 0)
            throw ValidationError("InvalidBeta", "beta grid must be positive");
        if (i > 0 && beta_grid(i) <= beta_grid(i - 1))
            throw ValidationError("InvalidBeta", "beta grid must be strictly increasing");
    }

    std::vector<Mode> current = spectrum(sys, beta_grid(0));
    const size_t n_branches = current.size();
    SweepResult result;
    result.beta_grid = beta_grid;
    result.branches.assign(n_branches, {});
    result.continuity_score = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n_branches));
    for (size_t b = 0; b < n_branches; ++b) result.branches[b].push_back(current[b]);

    for (Eigen::Index k = 1; k < beta_grid.size(); ++k) {
        std::vector<Mode> next = spectrum(sys, beta_grid(k));
        Eigen::MatrixXd overlap(n_branches, n_branches);
        for (size_t i = 0; i < n_branches; ++i)
            for (size_t j = 0; j < n_branches; ++j)
                overlap(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    std::abs(result.branches[i].back().w.dot(next[j].w));

        // Greedy bijection on descending overlap.
        std::vector<Eigen::Index> assign(n_branches, -1);
        std::vector<bool> row_used(n_branches, false), col_used(n_branches, false);
        for (size_t pick = 0; pick < n_branches; ++pick) {
            double best = -1.0;
            Eigen::Index bi = 0, bj = 0;
            for (Eigen::Index i = 0; i < overlap.rows(); ++i) {
                if (row_used[static_cast<size_t>(i)]) continue;
                for (Eigen::Index j = 0; j < overlap.cols(); ++j) {
                    if (col_used[static_cast<size_t>(j)]) continue;
                    if (overlap(i, j) > best) {
                        best = overlap(i, j);
                        bi = i;
                        bj = j;
                    }
                }
            }
            assign[static_cast<size_t>(bi)] = bj;
            row_used[static_cast<size_t>(bi)] = true;
            col_used[static_cast<size_t>(bj)] = true;
        }

        // Ambiguity check. Two kinds of competitor are not evidence of a
        // too-coarse grid and are excluded from the margin:
        //  - eigenvalues within the step's own movement (a coalescing pair:
        //    either labeling yields the same curves),
        //  - the spectral-symmetry partner at -conj(zeta), whose eigenvector
        //    is the conjugate of the chosen one and overlaps it structurally.
        double zscale = 0;
        for (const auto& m : next) zscale = std::max(zscale, std::abs(m.zeta));
        for (size_t i = 0; i < n_branches; ++i) {
            const Eigen::Index j = assign[i];
            const std::complex<double> chosen = next[static_cast<size_t>(j)].zeta;
            const double move = std::abs(chosen - result.branches[i].back().zeta);
            const double material = 10.0 * move + 1e-9 * std::max(1.0, zscale);
            double best_alt = 0.0;
            for (size_t jp = 0; jp < n_branches; ++jp) {
                if (static_cast<Eigen::Index>(jp) == j) continue;
                if (std::abs(next[jp].zeta - chosen) <= material) continue;
                if (std::abs(next[jp].zeta - (-std::conj(chosen))) <=
                    1e-6 * std::max(1.0, zscale))
                    continue;
                best_alt = std::max(best_alt, overlap(static_cast<Eigen::Index>(i),
                                                      static_cast<Eigen::Index>(jp)));
            }
            // Overdamped pairs born at an exceptional point also stay
            // structurally correlated, so the margin can be small while the
            // continuation itself is unambiguous; only gate on the margin
            // when the eigenvector actually rotated over the step.
            const double own = overlap(static_cast<Eigen::Index>(i), j);
            if ((own < 0.95 && own - best_alt < 0.1) || own < 0.5)
                throw NumericalError("TrackingAmbiguity",
                                     "branch assignment ambiguous at beta = " +
                                         std::to_string(beta_grid(k)) + " (margin " +
                                         std::to_string(own - best_alt) + ", overlap " +
                                         std::to_string(own) + ")");
            result.continuity_score(static_cast<Eigen::Index>(i)) =
                std::min(result.continuity_score(static_cast<Eigen::Index>(i)), own);
            result.branches[i].push_back(next[static_cast<size_t>(j)]);
        }
    }
    return result;
}

ResidualTable asymptotic_residuals(const SweepResult& sw, const AsymptoticModel& model,
                                   const LagrangianSystem& sys) {
    const Eigen::Index n_pts = sw.beta_grid.size();
    if (n_pts < 8) throw ValidationError("InsufficientRange", "grid too short for a fit");
    const double beta_top = sw.beta_grid(n_pts - 1);
    DichotomyReport rep = characteristic_scalars(sys);
    if (beta_top < 1e3 * std::max(1.0, rep.split_threshold()))
        throw ValidationError("InsufficientRange",
                              "sweep must reach 1e3 * max(1, 2 omega_max / b_min)");

    // Match branches to coefficients by nearest prediction at the top point.
    const std::complex<double> i(0.0, 1.0);
    const Eigen::Index n_hl = model.b_coeffs.size();
    const Eigen::Index n_ll = model.rho_lowloss.size();
    std::vector<std::complex<double>> predictions;
    for (Eigen::Index j = 0; j < n_hl; ++j)
        predictions.push_back(model.rho_highloss(j) - i * model.b_coeffs(j) * beta_top);
    for (Eigen::Index j = 0; j < n_ll; ++j)
        predictions.push_back(model.rho_lowloss(j) - i * model.d_coeffs(j) / beta_top);

    const size_t n_branches = sw.branches.size();
    if (predictions.size() != n_branches)
        throw ValidationError("DimensionMismatch", "model size does not match branch count");

    std::vector<Eigen::Index> coeff_of(n_branches, -1);
    std::vector<bool> used(predictions.size(), false);
    for (size_t pick = 0; pick < n_branches; ++pick) {
        double best = std::numeric_limits<double>::infinity();
        size_t bb = 0, bp = 0;
        for (size_t b = 0; b < n_branches; ++b) {
            if (coeff_of[b] >= 0) continue;
            const std::complex<double> z = sw.branches[b].back().zeta;
            for (size_t p = 0; p < predictions.size(); ++p) {
                if (used[p]) continue;
                double dist = std::abs(z - predictions[p]);
                if (dist < best) {
                    best = dist;
                    bb = b;
                    bp = p;
                }
            }
        }
        coeff_of[bb] = static_cast<Eigen::Index>(bp);
        used[bp] = true;
    }

    ResidualTable table;
    for (size_t b = 0; b < n_branches; ++b) {
        const Eigen::Index p = coeff_of[b];
        const bool high_loss = p < n_hl;
        BranchResidual row;
        row.branch = static_cast<Eigen::Index>(b);
        row.klass = high_loss ? ModeClass::HighLoss
                              : (std::abs(model.rho_lowloss(p - n_hl)) >
                                         kClusterTol * std::max(1.0, rep.omega_max)
                                     ? ModeClass::LowLossHighQ
                                     : ModeClass::LowLossLowQ);
        row.coefficient = high_loss ? p : p - n_hl;

        std::vector<double> betas, e_re, e_im, re_vals;
        for (Eigen::Index k = 0; k < n_pts; ++k) {
            const double beta = sw.beta_grid(k);
            if (beta < beta_top / 100.0) continue;  // top two decades
            const std::complex<double> z = sw.branches[b][static_cast<size_t>(k)].zeta;
            betas.push_back(beta);
            re_vals.push_back(z.real());
            if (high_loss) {
                e_re.push_back(std::abs(z.real() - model.rho_highloss(p)));
                e_im.push_back(std::abs(-z.imag() - model.b_coeffs(p) * beta));
            } else {
                e_re.push_back(std::abs(z.real() - model.rho_lowloss(p - n_hl)));
                e_im.push_back(std::abs(-z.imag() - model.d_coeffs(p - n_hl) / beta));
            }
        }

        FitResult fre = fit_decay_exponent(betas, e_re);
        FitResult fim = fit_decay_exponent(betas, e_im);
        row.re_exponent = fre.exponent;
        row.damping_exponent = fim.exponent;
        row.re_beta_inv_coeff = fit_beta_inv_coeff(betas, re_vals);
        row.re_pass = !fre.measurable || fre.exponent >= 1.8;
        row.q_unbounded = !high_loss &&
                          std::find(model.zero_d_branches.begin(), model.zero_d_branches.end(),
                                    p - n_hl) != model.zero_d_branches.end();
        const double want = high_loss ? 0.8 : 2.5;
        row.damping_pass = row.q_unbounded || !fim.measurable || fim.exponent >= want;
        table.rows.push_back(row);
    }
    std::sort(table.rows.begin(), table.rows.end(),
              [](const BranchResidual& a, const BranchResidual& b) { return a.branch < b.branch; });
    return table;
}

bool ResidualTable::all_pass() const {
    for (const auto& r : rows)
        if (!r.re_pass || !r.damping_pass) return false;
    return true;
}

}  // namespace gyro
