#include "gcov/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "gcov/chi_square.hpp"
#include "gcov/rng.hpp"
#include "gcov/stats.hpp"

namespace gcov {
namespace {

const double kInf = std::numeric_limits<double>::infinity();
constexpr double kPenaltyWeight = 1e3;

double objective_parts(const ModelSpec& model, const ThetaVector& theta,
                       const SeriesMatrix& data, int H, double* penalty_out) {
    const Residuals res = model.residuals(theta, data);
    const SeriesMatrix& u = res.series;
    if (u.length() <= H + 1)
        throw TooShort("residual series too short for H = " + std::to_string(H));
    const AutocovMatrix g0 = sample_autocov(u, 0);
    double sum = 0.0;
    for (int h = 1; h <= H; ++h) sum += trace_r2(sample_autocov(u, h), g0);
    if (penalty_out) *penalty_out = res.penalty;
    return sum;
}

ThetaVector with_values(const ModelSpec& model, const Eigen::VectorXd& x) {
    ThetaVector theta = model.param_template();
    theta.values = x;
    return theta;
}

// Objective wrapper for the optimizer: infeasible points map to +inf.
ObjectiveFn safe_objective(const ModelSpec& model, const SeriesMatrix& data,
                           int H) {
    return [&model, &data, H](const Eigen::VectorXd& x) -> double {
        try {
            double penalty = 0.0;
            const double val =
                objective_parts(model, with_values(model, x), data, H, &penalty);
            return val + kPenaltyWeight * penalty;
        } catch (const Error&) {
            return kInf;
        }
    };
}

// Expand prod_j (1 - z / mu_j); returns the coefficients c_k of
// 1 - sum_k c_k z^k, or an empty vector when they come out complex.
Eigen::VectorXd poly_from_roots(const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> c{1.0};
    for (const auto& mu : roots) {
        std::vector<std::complex<double>> next(c.size() + 1, 0.0);
        for (size_t i = 0; i < c.size(); ++i) {
            next[i] += c[i];
            next[i + 1] -= c[i] / mu;
        }
        c = std::move(next);
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(c.size()) - 1);
    for (size_t k = 1; k < c.size(); ++k) {
        if (std::fabs(c[k].imag()) > 1e-8 * (1.0 + std::fabs(c[k].real())))
            return Eigen::VectorXd();
        out(static_cast<Eigen::Index>(k) - 1) = -c[k].real();
    }
    return out;
}

// Least-squares AR(p) fit without intercept; returns coefficient vector.
Eigen::VectorXd ols_ar(const Eigen::RowVectorXd& y, int p) {
    const Eigen::Index T = y.size();
    const Eigen::Index n = T - p;
    Eigen::MatrixXd x(p, n);
    for (int j = 1; j <= p; ++j) x.row(j - 1) = y.segment(p - j, n);
    const Eigen::VectorXd rhs = y.tail(n).transpose();
    return (x * x.transpose()).ldlt().solve(x * rhs);
}

}  // namespace

double gcov_objective(const ModelSpec& model, const ThetaVector& theta,
                      const SeriesMatrix& data, int H) {
    if (H < 1) throw DomainError("gcov_objective requires H >= 1");
    double penalty = 0.0;
    const double val = objective_parts(model, theta, data, H, &penalty);
    return val + kPenaltyWeight * penalty;
}

namespace detail {

Eigen::MatrixXd jacobian_fd(const ResidualFn& residual_fn,
                            const Eigen::VectorXd& theta,
                            const Eigen::VectorXd& lower,
                            const Eigen::VectorXd& upper, int H,
                            double fd_step_scale) {
    const Eigen::Index J = theta.size();

    auto stacked_autocov = [&](const Eigen::VectorXd& th) -> Eigen::VectorXd {
        const SeriesMatrix u = residual_fn(th).series;
        const Eigen::Index K = u.components();
        Eigen::VectorXd v(K * K * H);
        for (int h = 1; h <= H; ++h) {
            const AutocovMatrix g = sample_autocov(u, h);
            for (Eigen::Index i = 0; i < K; ++i)
                for (Eigen::Index j = 0; j < K; ++j)
                    v((h - 1) * K * K + i * K + j) = g.gamma(i, j);
        }
        return v;
    };

    Eigen::MatrixXd jac;
    for (Eigen::Index j = 0; j < J; ++j) {
        const double eps = fd_step_scale * std::max(1.0, std::fabs(theta(j)));
        if (theta(j) + eps > upper(j) || theta(j) - eps < lower(j))
            throw BoundaryTheta("finite-difference stencil leaves the bounds at " +
                                std::to_string(j));
        Eigen::VectorXd tp = theta, tm = theta;
        tp(j) += eps;
        tm(j) -= eps;
        const Eigen::VectorXd col = (stacked_autocov(tp) - stacked_autocov(tm)) /
                                    (2.0 * eps);
        if (jac.size() == 0) jac.resize(col.size(), J);
        jac.col(j) = col;
    }
    return jac;
}

Eigen::MatrixXd omega_matrix(const Eigen::MatrixXd& jacobian,
                             const Eigen::MatrixXd& gamma0, int H) {
    const Eigen::Index K = gamma0.rows();
    const Eigen::Index KK = K * K;
    if (jacobian.rows() != KK * H)
        throw ShapeMismatch("jacobian row count does not match K^2 H");

    const Eigen::MatrixXd s = gcov::detail::inverse_sqrt_spd(gamma0);
    const Eigen::MatrixXd g0_inv = s * s;
    Eigen::MatrixXd w(KK, KK);
    for (Eigen::Index i = 0; i < K; ++i)
        for (Eigen::Index k = 0; k < K; ++k)
            w.block(i * K, k * K, K, K) = g0_inv(i, k) * g0_inv;

    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(jacobian.cols(), jacobian.cols());
    for (int h = 0; h < H; ++h) {
        const Eigen::MatrixXd d = jacobian.middleRows(h * KK, KK);
        omega += d.transpose() * w * d;
    }
    return 0.5 * (omega + omega.transpose());
}

std::vector<Eigen::VectorXd> model_starts(const ModelSpec& model,
                                          const SeriesMatrix& data) {
    std::vector<Eigen::VectorXd> starts;
    const ThetaVector& tmpl = model.param_template();

    switch (model.family()) {
        case ModelFamily::causal_var: {
            const Eigen::MatrixXd& y = data.values();
            const Eigen::Index K = y.rows();
            const int p = model.var_order();
            const Eigen::Index T = y.cols();
            const Eigen::Index n = T - p;
            Eigen::MatrixXd x(K * p, n);
            for (int j = 1; j <= p; ++j)
                x.middleRows((j - 1) * K, K) = y.middleCols(p - j, n);
            const Eigen::MatrixXd b =
                ((x * x.transpose()).ldlt().solve(x * y.rightCols(n).transpose()))
                    .transpose();
            Eigen::VectorXd theta(K * K * p);
            for (int j = 0; j < p; ++j)
                for (Eigen::Index i = 0; i < K; ++i)
                    for (Eigen::Index l = 0; l < K; ++l)
                        theta(j * K * K + i * K + l) = b(i, j * K + l);
            starts.push_back(theta);
            break;
        }
        case ModelFamily::ar_arch: {
            const double a =
                std::clamp(ols_ar(data.values().row(0), 1)(0), tmpl.lower(0) + 0.01,
                           tmpl.upper(0) - 0.01);
            Eigen::VectorXd theta(2);
            theta << a, 0.1;
            starts.push_back(theta);
            break;
        }
        case ModelFamily::mar: {
            const int r = model.mar_causal_order();
            const int s = model.mar_noncausal_order();
            starts.push_back(Eigen::VectorXd::Zero(r + s));
            if (r == 0 || s == 0) break;

            // Candidate starts from splitting the roots of the fitted causal
            // AR(r+s) polynomial between the two MAR factors. The MAR has the
            // same second-order structure as a causal AR with polynomial
            // Phi(z) Psi(z), so one of the splits sits near the truth.
            const int p = r + s;
            const Eigen::VectorXd b = ols_ar(data.values().row(0), p);
            Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(p, p);
            comp.row(0) = b.transpose();
            comp.block(1, 0, p - 1, p - 1).setIdentity();
            const Eigen::VectorXcd invroots = comp.eigenvalues();

            for (unsigned mask = 0; mask < (1u << p); ++mask) {
                if (__builtin_popcount(mask) != s) continue;
                std::vector<std::complex<double>> sel, rem;
                for (int i = 0; i < p; ++i) {
                    const std::complex<double> mu = 1.0 / invroots(i);
                    if (mask & (1u << i))
                        sel.push_back(mu);
                    else
                        rem.push_back(mu);
                }
                const Eigen::VectorXd psi = poly_from_roots(sel);
                const Eigen::VectorXd phi = poly_from_roots(rem);
                if (psi.size() != s || phi.size() != r) continue;
                Eigen::VectorXd theta(p);
                theta << phi, psi;
                if ((theta.array().abs() >= 0.998).any()) continue;
                bool duplicate = false;
                for (const auto& st : starts)
                    if ((st - theta).lpNorm<Eigen::Infinity>() < 1e-6) {
                        duplicate = true;
                        break;
                    }
                if (!duplicate) starts.push_back(theta);
            }
            break;
        }
    }
    return starts;
}

}  // namespace detail

Eigen::MatrixXd autocov_jacobian(const ModelSpec& model, const ThetaVector& theta,
                                 const SeriesMatrix& data, int H,
                                 double fd_step_scale) {
    const auto residual_fn = [&](const Eigen::VectorXd& x) {
        return model.residuals(with_values(model, x), data);
    };
    return detail::jacobian_fd(residual_fn, theta.values, theta.lower, theta.upper,
                               H, fd_step_scale);
}

int identification_rank(const Eigen::MatrixXd& jacobian) {
    if (!jacobian.allFinite()) throw DomainError("jacobian has non-finite entries");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double thresh =
        sv(0) * static_cast<double>(std::max(jacobian.rows(), jacobian.cols())) *
        1e-12;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rank;
    return rank;
}

namespace {

// Shared by the public covariance op and the estimator assembly.
Eigen::MatrixXd covariance_from_omega(const Eigen::MatrixXd& omega,
                                      Eigen::Index n_obs, bool* singular) {
    const Eigen::Index J = omega.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(omega);
    const Eigen::VectorXd& lam = es.eigenvalues();
    const double lam_max = lam.maxCoeff();
    const double tol = std::max(1e-300, lam_max * J * 1e-12);
    bool deficient = false;
    Eigen::VectorXd inv_lam(J);
    for (Eigen::Index i = 0; i < J; ++i) {
        if (lam(i) > tol) {
            inv_lam(i) = 1.0 / lam(i);
        } else {
            inv_lam(i) = 0.0;  // pseudo-inverse on the deficient subspace
            deficient = true;
        }
    }
    if (singular) *singular = deficient;
    Eigen::MatrixXd cov = es.eigenvectors() * inv_lam.asDiagonal() *
                          es.eigenvectors().transpose() /
                          static_cast<double>(n_obs);
    return 0.5 * (cov + cov.transpose());
}

Eigen::MatrixXd hessian_fd(const ObjectiveFn& f, const Eigen::VectorXd& x) {
    const Eigen::Index n = x.size();
    const double f0 = f(x);
    Eigen::VectorXd eps(n);
    for (Eigen::Index j = 0; j < n; ++j)
        eps(j) = 1e-4 * std::max(1.0, std::fabs(x(j)));

    Eigen::MatrixXd h(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd xp = x, xm = x;
        xp(i) += eps(i);
        xm(i) -= eps(i);
        h(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (eps(i) * eps(i));
        for (Eigen::Index j = i + 1; j < n; ++j) {
            Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
            xpp(i) += eps(i); xpp(j) += eps(j);
            xpm(i) += eps(i); xpm(j) -= eps(j);
            xmp(i) -= eps(i); xmp(j) += eps(j);
            xmm(i) -= eps(i); xmm(j) -= eps(j);
            h(i, j) = h(j, i) =
                (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * eps(i) * eps(j));
        }
    }
    return h;
}

}  // namespace

Eigen::MatrixXd asymptotic_covariance(const ModelSpec& model,
                                      const ThetaVector& theta_hat,
                                      const SeriesMatrix& data, int H,
                                      double fd_step_scale) {
    const Eigen::MatrixXd jac =
        autocov_jacobian(model, theta_hat, data, H, fd_step_scale);
    const SeriesMatrix u = model.residuals(theta_hat, data).series;
    const Eigen::MatrixXd omega =
        detail::omega_matrix(jac, sample_autocov(u, 0).gamma, H);
    bool singular = false;
    const Eigen::MatrixXd cov = covariance_from_omega(omega, u.length(), &singular);
    if (singular)
        throw SingularOmega("Omega has rank below dim(theta); parameters are "
                            "locally unidentified");
    return cov;
}

EstimationResult gcov_estimate(const ModelSpec& model, const SeriesMatrix& data,
                               const GcovOptions& opts) {
    const ThetaVector& tmpl = model.param_template();
    const Eigen::Index J = tmpl.dim();
    const Eigen::Index K = model.residual_dim();

    const ObjectiveFn f = safe_objective(model, data, opts.H);

    // An order-condition violation (J > K^2 H) is not blocked here; the rank
    // check below reports it through df_exhausted.
    std::vector<Eigen::VectorXd> starts = detail::model_starts(model, data);
    RngStream start_rng(opts.seed, 0x73746172ULL);
    for (int i = 0; i < opts.multistart; ++i) {
        Eigen::VectorXd x(J);
        for (Eigen::Index j = 0; j < J; ++j) {
            const double lo = std::isfinite(tmpl.lower(j)) ? tmpl.lower(j) : -1.0;
            const double hi = std::isfinite(tmpl.upper(j)) ? tmpl.upper(j) : 1.0;
            x(j) = start_rng.uniform(lo, hi);
        }
        starts.push_back(x);
    }

    OptimOptions oo;
    oo.max_iter = opts.max_iter;
    oo.f_tol = opts.f_tol;
    oo.x_tol = opts.x_tol;

    EstimationResult result;
    result.theta_hat = tmpl;

    OptimResult best;
    best.f = kInf;
    int total_iter = 0;
    for (const auto& x0 : starts) {
        const double f0 = f(x0);
        result.start_initial_objectives.push_back(f0);
        OptimResult r = nelder_mead(f, x0, tmpl.lower, tmpl.upper, oo);
        result.start_final_objectives.push_back(r.f);
        total_iter += r.iterations;
        if (r.f < best.f) best = r;
    }
    if (!std::isfinite(best.f))
        throw IllConditioned("every start produced an ill-conditioned objective");

    const OptimResult polish =
        bfgs_polish(f, best.x, tmpl.lower, tmpl.upper, oo,
                    std::min(60, opts.max_iter));
    total_iter += polish.iterations;
    if (std::isfinite(polish.f) && polish.f <= best.f) {
        best.x = polish.x;
        best.f = polish.f;
        best.converged = best.converged || polish.converged;
    }

    result.theta_hat.values = best.x;
    result.objective = best.f;
    result.converged = best.converged;
    result.iterations = total_iter;
    result.H = opts.H;
    result.K = K;

    const SeriesMatrix u = model.residuals(result.theta_hat, data).series;
    result.n_obs_used = u.length();
    result.statistic = static_cast<double>(result.n_obs_used) * result.objective;

    // Diagnostics want an interior point; nudge off the boundary if the
    // optimum was clamped there.
    ThetaVector theta_j = result.theta_hat;
    for (Eigen::Index j = 0; j < J; ++j) {
        const double eps =
            2.0 * opts.fd_step_scale * std::max(1.0, std::fabs(theta_j.values(j)));
        if (std::isfinite(tmpl.lower(j)))
            theta_j.values(j) = std::max(theta_j.values(j), tmpl.lower(j) + eps);
        if (std::isfinite(tmpl.upper(j)))
            theta_j.values(j) = std::min(theta_j.values(j), tmpl.upper(j) - eps);
    }

    const Eigen::MatrixXd jac =
        autocov_jacobian(model, theta_j, data, opts.H, opts.fd_step_scale);
    result.jacobian_rank = identification_rank(jac);

    const Eigen::MatrixXd omega =
        detail::omega_matrix(jac, sample_autocov(u, 0).gamma, opts.H);
    result.cov_corollary1 =
        covariance_from_omega(omega, result.n_obs_used, &result.singular_omega);

    Eigen::MatrixXd hess = hessian_fd(f, best.x);
    if (hess.allFinite()) {
        bool hess_singular = false;
        result.cov_hessian =
            2.0 * covariance_from_omega(hess, result.n_obs_used, &hess_singular);
    } else {
        result.cov_hessian = Eigen::MatrixXd::Constant(
            J, J, std::numeric_limits<double>::quiet_NaN());
    }

    const int dof = static_cast<int>(K * K) * opts.H - result.jacobian_rank;
    if (dof >= 1) {
        result.df = dof;
        result.p_value = chi2_sf(std::max(0.0, result.statistic), dof);
    } else {
        result.df = 0;
        result.df_exhausted = true;
        result.p_value = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

}  // namespace gcov
