#pragma once

#include <Eigen/Dense>
#include <functional>

namespace gcov {

/// Objective for the derivative-free minimizers. May return +inf to signal an
/// infeasible or ill-conditioned point.
using ObjectiveFn = std::function<double(const Eigen::VectorXd&)>;

struct OptimOptions {
    int max_iter = 2000;
    double f_tol = 1e-10;
    double x_tol = 1e-8;
};

struct OptimResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

/**
 * @brief Nelder-Mead simplex minimization inside a coordinate box.
 *
 * Candidate points are projected onto the box before evaluation. Convergence
 * when the simplex function spread falls below f_tol * max(1, |f_best|) or
 * the simplex diameter falls below x_tol.
 */
OptimResult nelder_mead(const ObjectiveFn& f, const Eigen::VectorXd& x0,
                        const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                        const OptimOptions& opts);

/**
 * @brief Quasi-Newton polish with central finite-difference gradients.
 *
 * BFGS updates with Armijo backtracking; steps are projected onto the box.
 * Intended to refine a point already near a minimum.
 */
OptimResult bfgs_polish(const ObjectiveFn& f, const Eigen::VectorXd& x0,
                        const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                        const OptimOptions& opts, int max_polish_iter = 60);

/// Central finite-difference gradient with per-coordinate relative steps.
Eigen::VectorXd fd_gradient(const ObjectiveFn& f, const Eigen::VectorXd& x,
                            double step_scale = 1e-6);

}  // namespace gcov
