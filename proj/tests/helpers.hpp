#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "gcov/rng.hpp"
#include "gcov/series.hpp"

namespace testutil {

inline gcov::SeriesMatrix random_series(Eigen::Index K, Eigen::Index T,
                                        std::uint64_t seed) {
    gcov::RngStream rng(seed, 0);
    Eigen::MatrixXd v(K, T);
    for (Eigen::Index i = 0; i < K; ++i)
        for (Eigen::Index t = 0; t < T; ++t) v(i, t) = rng.normal();
    return gcov::SeriesMatrix(std::move(v));
}

/// Stationary AR(1) path with standard normal shocks and burn-in.
inline gcov::SeriesMatrix ar1_series(double a, Eigen::Index T, std::uint64_t seed,
                                     Eigen::Index burn = 300) {
    gcov::RngStream rng(seed, 0);
    Eigen::VectorXd y(T + burn);
    y(0) = rng.normal();
    for (Eigen::Index t = 1; t < T + burn; ++t)
        y(t) = a * y(t - 1) + rng.normal();
    return gcov::SeriesMatrix(y.tail(T).transpose());
}

/// Independent double-loop autocovariance oracle (full-sample mean, 1/(T-h)).
inline Eigen::MatrixXd naive_autocov(const Eigen::MatrixXd& y, Eigen::Index h) {
    const Eigen::Index K = y.rows();
    const Eigen::Index T = y.cols();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(K);
    for (Eigen::Index t = 0; t < T; ++t) mean += y.col(t);
    mean /= static_cast<double>(T);

    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(K, K);
    for (Eigen::Index t = h; t < T; ++t)
        for (Eigen::Index i = 0; i < K; ++i)
            for (Eigen::Index j = 0; j < K; ++j)
                g(i, j) += (y(i, t) - mean(i)) * (y(j, t - h) - mean(j));
    g /= static_cast<double>(T - h);
    if (h == 0) g = 0.5 * (g + g.transpose()).eval();
    return g;
}

/// Adaptive Simpson quadrature, used as the chi-square density oracle.
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol = 1e-12, int depth = 24) {
    const double c = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fc = f(c);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    std::function<double(double, double, double, double, double, double, int)>
        rec = [&](double a_, double b_, double fa_, double fb_, double fc_,
                  double whole_, int d) -> double {
        const double c_ = 0.5 * (a_ + b_);
        const double lm = 0.5 * (a_ + c_), rm = 0.5 * (c_ + b_);
        const double flm = f(lm), frm = f(rm);
        const double left = (c_ - a_) / 6.0 * (fa_ + 4.0 * flm + fc_);
        const double right = (b_ - c_) / 6.0 * (fc_ + 4.0 * frm + fb_);
        if (d <= 0 || std::fabs(left + right - whole_) < 15.0 * tol)
            return left + right + (left + right - whole_) / 15.0;
        return rec(a_, c_, fa_, fc_, flm, left, d - 1) +
               rec(c_, b_, fc_, fb_, frm, right, d - 1);
    };
    return rec(a, b, fa, fb, fc, whole, depth);
}

inline double chi2_density(double x, int df) {
    if (x <= 0.0) return 0.0;
    const double a = 0.5 * df;
    return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) -
                    std::lgamma(a));
}

/// Upper-tail chi-square probability by quadrature of the density. The
/// substitution t = u^2 removes the integrable singularity at zero (df = 1).
inline double chi2_sf_oracle(double x, int df) {
    if (x <= 0.0) return 1.0;
    const auto g = [df](double u) { return 2.0 * u * chi2_density(u * u, df); };
    return 1.0 - adaptive_simpson(g, 0.0, std::sqrt(x), 1e-13);
}

}  // namespace testutil
