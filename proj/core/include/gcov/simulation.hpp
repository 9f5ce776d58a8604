#pragma once

#include <cstdint>
#include <vector>

#include "gcov/estimator.hpp"
#include "gcov/rng.hpp"
#include "gcov/series.hpp"

namespace gcov {

struct SimulatedSeries {
    SeriesMatrix series;
    bool nonstationary_warning = false;
};

/**
 * @brief Simulate the AR(1)-ARCH(1) process y_t = a1 y_{t-1} + sigma_t u_t
 * with sigma_t = sqrt(1 + alpha1 eps_{t-1}^2) and standard normal u_t.
 *
 * 500 burn-in points are discarded. Near-boundary parameter cells are still
 * simulated, with the warning flag set when |a1| >= 1 or alpha1 >= 1.
 */
SimulatedSeries simulate_ar_arch(double a1, double alpha1, Eigen::Index T,
                                 RngStream& rng);

/**
 * @brief Simulate a univariate MAR(r, s) with Student-t(nu) errors.
 *
 * Draws errors over an extended window and applies the truncated two-sided
 * moving average: the noncausal filter forward and the causal filter
 * backward, each expanded to m terms with lambda^m < 1e-8 for the slowest
 * coefficient decay rate lambda. m points are trimmed from each end. Pass
 * nu = infinity for Gaussian errors.
 *
 * @throws ExplosivePolynomial if either polynomial has a root inside or on
 *         the unit circle
 */
SeriesMatrix simulate_mar(const Eigen::VectorXd& phi, const Eigen::VectorXd& psi,
                          Eigen::Index T, double nu, RngStream& rng);

/// Standard Student-t draw; forwards to the stream.
double sample_student_t(double nu, RngStream& rng);

namespace detail {

/// Two-sided MA filter applied to a given shock path: noncausal expansion of
/// psi forward, causal expansion of phi backward, truncated at m terms. The
/// input must have length T + 2m; the output has length T.
Eigen::VectorXd mar_filter(const Eigen::VectorXd& eps, const Eigen::VectorXd& phi,
                           const Eigen::VectorXd& psi, Eigen::Index m);

/// Truncation order: smallest m with lambda^m < 1e-8, lambda the largest
/// inverse-root modulus of the two polynomials.
Eigen::Index mar_truncation_order(const Eigen::VectorXd& phi,
                                  const Eigen::VectorXd& psi);

/// Largest modulus among the inverse roots of 1 - sum_j c_j z^j.
double max_inverse_root(const Eigen::VectorXd& coeffs);

}  // namespace detail

enum class SimFamily { ar_arch, mar };

/// One cell of the Monte Carlo grid: a pair of true parameter values,
/// (a1, alpha1) for ar_arch or (phi1, psi1) for mar.
struct GridCell {
    double first = 0.0;
    double second = 0.0;
};

struct MonteCarloOptions {
    Eigen::Index T = 400;
    int replications = 100;
    double nu = 6.0;          ///< error dof for the mar family
    GcovOptions estimation;
    int threads = 0;          ///< 0: use GCOV_THREADS or hardware concurrency
};

struct MonteCarloCell {
    GridCell cell;
    Eigen::VectorXd mean;        ///< per-parameter mean over replications
    Eigen::VectorXd quantile_5;
    Eigen::VectorXd quantile_95;
    int replications = 0;        ///< successful replications
    int failures = 0;
    bool flagged = false;        ///< failure share exceeded 10%
};

struct MonteCarloTable {
    SimFamily family = SimFamily::ar_arch;
    std::vector<std::string> param_names;
    std::vector<MonteCarloCell> cells;
};

/**
 * @brief Simulate-estimate loop over a parameter grid.
 *
 * Per cell and replication: simulate a path, run the GCov estimator, collect
 * theta_hat. Failed replications (non-convergence or ill-conditioning) are
 * counted and excluded from the moments; a cell is flagged when more than 10%
 * fail. Streams are assigned by (cell, replication) index, so the table is
 * reproducible regardless of how the work is scheduled across threads.
 *
 * For the mar family residuals are stacked with their squares before the
 * trace criterion is evaluated.
 */
MonteCarloTable run_monte_carlo(SimFamily family, const std::vector<GridCell>& grid,
                                const MonteCarloOptions& opts);

}  // namespace gcov
