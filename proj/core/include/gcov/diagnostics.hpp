#pragma once

#include <vector>

#include "gcov/estimator.hpp"
#include "gcov/series.hpp"
#include "gcov/stats.hpp"

namespace gcov {

enum class TestKind { weak_wn, sur, residual_based };

struct TestReport {
    TestKind kind = TestKind::weak_wn;
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
    int H = 0;
    Eigen::Index K = 0;

    // For multivariate weak-WN reports the literature supports two df
    // conventions; the alternative (K*H) is reported alongside when K > 1.
    bool has_alt_df = false;
    int df_alt = 0;
    double p_value_alt = 1.0;

    // df fell to zero (just-identified residual test); no p-value.
    bool df_exhausted = false;
};

/**
 * @brief Portmanteau test of the weak white noise hypothesis.
 *
 * statistic = T sum_{h=1..H} Tr[R^2(h)], referred to chi2(K^2 H). For K > 1
 * the chi2(K H) reference is reported as the alternative.
 */
TestReport weak_wn_test(const SeriesMatrix& series, int H);

/**
 * @brief SUR form of the portmanteau statistic (single lag-1 block test).
 *
 * Builds the stacked regressor (Y_{t-1}', ..., Y_{t-H}')' and evaluates one
 * K x KH trace-R^2 with the block-Toeplitz variance, so H = 1 coincides with
 * weak_wn_test exactly.
 */
TestReport sur_xi(const SeriesMatrix& series, int H);

/**
 * @brief Residual-based specification test from a completed estimation.
 *
 * statistic = n_obs_used * L_T(theta_hat), referred to chi2(K^2 H - rank).
 * The values are shared with the estimation result, never recomputed. When
 * the rank exhausts the degrees of freedom the raw statistic is reported with
 * df = 0 and no p-value.
 */
TestReport residual_based_test(const EstimationResult& result);

/// Autocorrelation matrices D^{-1/2} Gamma(h) D^{-1/2} for h = 0..max_lag.
std::vector<Eigen::MatrixXd> acf(const SeriesMatrix& series, int max_lag);

}  // namespace gcov
