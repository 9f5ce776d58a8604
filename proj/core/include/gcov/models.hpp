#pragma once

#include <string>
#include <vector>

#include "gcov/series.hpp"
#include "gcov/transforms.hpp"

namespace gcov {

/// Flat parameter vector with names and per-coordinate box bounds.
struct ThetaVector {
    Eigen::VectorXd values;
    std::vector<std::string> names;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    Eigen::Index dim() const { return values.size(); }
    void validate() const;
};

/// Residual series plus the variance-floor penalty accumulated while
/// computing it (nonzero only for exploratory ARCH parameters).
struct Residuals {
    SeriesMatrix series;
    double penalty = 0.0;
};

/**
 * @brief Residuals of a causal VAR(p): u_t = Y_t - sum_j Phi_j Y_{t-j}.
 *
 * Output covers t = p+1..T, so p points are consumed at the start.
 */
SeriesMatrix residuals_var(const SeriesMatrix& series,
                           const std::vector<Eigen::MatrixXd>& phis);

/**
 * @brief Residuals of a univariate MAR(r, s): Phi(L) Psi(L^{-1}) y_t = u_t.
 *
 * First the forward filter w_t = y_t - sum_k psi_k y_{t+k}, then the backward
 * filter u_t = w_t - sum_j phi_j w_{t-j}. Output length is T - r - s with s
 * points consumed at the end and r at the start.
 */
SeriesMatrix residuals_mar(const SeriesMatrix& series,
                           const Eigen::VectorXd& phi,
                           const Eigen::VectorXd& psi);

/**
 * @brief Standardized AR(1)-ARCH(1) residuals, stacked with absolute values.
 *
 * eps_t = y_t - a1 y_{t-1}; u_t = eps_t / sqrt(1 + alpha1 eps_{t-1}^2); the
 * result rows are (u_t, |u_t|) for t = 3..T. The drift and variance levels
 * are fixed (a0 = 0, alpha0 = 1) for identification. A negative alpha1 can
 * push the variance argument below zero during exploration; it is floored at
 * 1e-8 and the total deficit is reported as a penalty.
 */
Residuals residuals_ar_arch(const SeriesMatrix& series, double a1, double alpha1);

enum class ModelFamily { causal_var, mar, ar_arch };

/**
 * @brief A named residual map g(Y_t; theta) plus parameter metadata.
 *
 * Immutable after construction; residual evaluation is pure, so concurrent
 * evaluation at different theta values is safe.
 */
class ModelSpec {
public:
    /// Causal VAR(p) on K components; theta is the row-major stack of Phi_1..Phi_p.
    static ModelSpec causal_var(Eigen::Index K, int p,
                                std::vector<TransformTag> transforms = {});

    /// Univariate MAR(r, s); theta = (phi_1..phi_r, psi_1..psi_s).
    static ModelSpec mar(int r, int s, std::vector<TransformTag> transforms = {});

    /// Univariate AR(1)-ARCH(1); theta = (a1, alpha1); output stacked (u, |u|).
    static ModelSpec ar_arch();

    /// Look up a family by CLI name: "var", "mar" or "ar_arch".
    static ModelFamily family_by_name(const std::string& name);

    const std::string& name() const { return name_; }
    ModelFamily family() const { return family_; }
    const ThetaVector& param_template() const { return param_template_; }
    int lead_trim() const { return lead_; }
    int lag_trim() const { return lag_; }
    Eigen::Index residual_dim() const { return residual_dim_; }
    Eigen::Index data_dim() const { return data_dim_; }
    const std::vector<TransformTag>& transforms() const { return transforms_; }

    int var_order() const { return p_; }
    int mar_causal_order() const { return r_; }
    int mar_noncausal_order() const { return s_; }

    /// Dispatch to the family residual map, then the transform stack.
    Residuals residuals(const ThetaVector& theta, const SeriesMatrix& data) const;

private:
    ModelSpec() = default;

    std::string name_;
    ModelFamily family_ = ModelFamily::causal_var;
    ThetaVector param_template_;
    std::vector<TransformTag> transforms_;
    Eigen::Index data_dim_ = 1;
    Eigen::Index residual_dim_ = 1;
    int lead_ = 0;  // points consumed at the end of the sample
    int lag_ = 0;   // points consumed at the start
    int p_ = 0, r_ = 0, s_ = 0;
};

}  // namespace gcov
