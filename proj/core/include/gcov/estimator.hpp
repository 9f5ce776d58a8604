#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gcov/models.hpp"
#include "gcov/optim.hpp"

namespace gcov {

struct GcovOptions {
    int H = 3;
    int multistart = 5;       ///< number of uniform-in-bounds random starts
    int max_iter = 2000;      ///< simplex iterations per start
    double f_tol = 1e-10;
    double x_tol = 1e-8;
    double fd_step_scale = 1e-5;
    std::uint64_t seed = 0;
};

struct EstimationResult {
    ThetaVector theta_hat;
    double objective = 0.0;   ///< L_T at theta_hat
    double statistic = 0.0;   ///< n_obs_used * objective
    int H = 0;
    Eigen::Index K = 0;       ///< residual dimension after transforms
    int df = 0;
    double p_value = 1.0;
    Eigen::MatrixXd cov_corollary1;  ///< inverse information / n_obs_used
    Eigen::MatrixXd cov_hessian;     ///< 2 Hess(L_T)^{-1} / n_obs_used
    int jacobian_rank = 0;
    bool converged = false;
    Eigen::Index n_obs_used = 0;
    int iterations = 0;

    bool singular_omega = false;     ///< covariance fell back to a pseudo-inverse
    bool df_exhausted = false;       ///< K^2 H <= rank: no p-value available

    // Multistart diagnostics: objective at each start before and after descent.
    std::vector<double> start_initial_objectives;
    std::vector<double> start_final_objectives;
};

/**
 * @brief The GCov objective L_T(theta) = sum_{h=1..H} Tr[R^2(h; theta)].
 *
 * Residual autocovariances (including the lag-0 weight) are recomputed at
 * every theta. The ARCH variance-floor penalty, when present, is added scaled
 * by 1e3 so exploratory parameter values are pushed back into the valid
 * region.
 *
 * @throws IllConditioned when the residual lag-0 covariance cannot be inverted
 */
double gcov_objective(const ModelSpec& model, const ThetaVector& theta,
                      const SeriesMatrix& data, int H);

/**
 * @brief Minimize the GCov objective and assemble the full result.
 *
 * Runs Nelder-Mead from every start (model-implied starts plus uniform draws
 * in the bounds from the seeded generator), polishes the winner with a
 * finite-difference BFGS descent, then fills in the covariance matrices, the
 * identification rank and the residual-based test statistic. Non-convergence
 * is reported through the converged flag rather than an exception.
 *
 * @throws IllConditioned if every start fails to produce a finite objective
 */
EstimationResult gcov_estimate(const ModelSpec& model, const SeriesMatrix& data,
                               const GcovOptions& opts);

/**
 * @brief Stacked Jacobian of the residual autocovariances in theta.
 *
 * Row block h (h = 1..H) holds the central finite-difference derivative of
 * vec Gamma_hat(h; theta)' (row-major flatten), so the matrix is (K^2 H) x J.
 * Steps are fd_step_scale * max(1, |theta_j|).
 *
 * @throws BoundaryTheta if a stencil point would leave the parameter box
 */
Eigen::MatrixXd autocov_jacobian(const ModelSpec& model, const ThetaVector& theta,
                                 const SeriesMatrix& data, int H,
                                 double fd_step_scale = 1e-5);

/**
 * @brief Per-sample asymptotic covariance of theta_hat.
 *
 * Inverts Omega = sum_h D_h' [G0^{-1} (x) G0^{-1}] D_h and divides by the
 * residual sample size. Falls back to a pseudo-inverse (flagged) when Omega
 * is rank deficient.
 */
Eigen::MatrixXd asymptotic_covariance(const ModelSpec& model,
                                      const ThetaVector& theta_hat,
                                      const SeriesMatrix& data, int H,
                                      double fd_step_scale = 1e-5);

/// Numerical rank of the stacked Jacobian via singular values.
int identification_rank(const Eigen::MatrixXd& jacobian);

namespace detail {

/// Residual evaluation as a plain function of theta, for generic FD code.
using ResidualFn = std::function<Residuals(const Eigen::VectorXd&)>;

Eigen::MatrixXd jacobian_fd(const ResidualFn& residual_fn,
                            const Eigen::VectorXd& theta,
                            const Eigen::VectorXd& lower,
                            const Eigen::VectorXd& upper, int H,
                            double fd_step_scale);

/// Omega(theta) built from the stacked Jacobian and the lag-0 weight.
Eigen::MatrixXd omega_matrix(const Eigen::MatrixXd& jacobian,
                             const Eigen::MatrixXd& gamma0, int H);

/// Model-implied starting points (OLS for AR/VAR, zero and polynomial
/// root-split candidates for MAR).
std::vector<Eigen::VectorXd> model_starts(const ModelSpec& model,
                                          const SeriesMatrix& data);

}  // namespace detail
}  // namespace gcov
