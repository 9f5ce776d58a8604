#pragma once

#include <Eigen/Dense>

#include "gcov/series.hpp"

namespace gcov {

/// Sample autocovariance matrix at a single lag.
struct AutocovMatrix {
    Eigen::Index lag = 0;
    Eigen::MatrixXd gamma;
};

/**
 * @brief Sample autocovariance Gamma_hat(h) with the PSD-preserving convention.
 *
 * Computes (1/(T-h)) * sum_t (y_t - ybar)(y_{t-h} - ybar)', where ybar is the
 * full-sample component mean. The lag-0 result is symmetrized as (G + G')/2.
 * The orientation makes Gamma_hat(h) Gamma_hat(0)^{-1} the lag-h regression
 * coefficient of y_t on y_{t-h}.
 *
 * @throws LagTooLarge    if h > T-2
 * @throws DegenerateSeries if any component has zero variance
 */
AutocovMatrix sample_autocov(const SeriesMatrix& series, Eigen::Index h);

/**
 * @brief Multivariate R-square summary Tr[G(h) G(0)^{-1} G(h)' G(0)^{-1}].
 *
 * Evaluated through the symmetric similarity form: with S = G(0)^{-1/2},
 * the value equals ||S G(h) S||_F^2, which keeps it nonnegative and equal to
 * the sum of the squared canonical correlations between y_t and y_{t-h}.
 *
 * @throws IllConditioned if the condition estimate of gamma_0 is >= 1e12
 */
double trace_r2(const AutocovMatrix& gamma_h, const AutocovMatrix& gamma_0);

/// Squared canonical correlations, descending. Their sum equals trace_r2.
Eigen::VectorXd canonical_correlations_sq(const AutocovMatrix& gamma_h,
                                          const AutocovMatrix& gamma_0);

/// Portmanteau statistic xi(H) = T * sum_{h=1..H} Tr[R^2(h)] of the series.
double portmanteau_xi(const SeriesMatrix& series, int H);

/**
 * @brief Quadratic-form route to the lag-1 statistic:
 * vec[G0^{-1} G1']' (G0^{-1} (x) G0) vec[G0^{-1} G1'].
 *
 * Algebraically identical to trace_r2(gamma_1, gamma_0); kept as an
 * independent evaluation path for cross-checks.
 */
double vec_kron_quadform(const AutocovMatrix& gamma_1, const AutocovMatrix& gamma_0);

namespace detail {

/// Condition-estimate ceiling for inverting a lag-0 covariance.
inline constexpr double kConditionLimit = 1e12;

/// Symmetric inverse square root of gamma_0, with the conditioning guard.
Eigen::MatrixXd inverse_sqrt_spd(const Eigen::MatrixXd& gamma_0);

}  // namespace detail
}  // namespace gcov
