#include "gcov/stats.hpp"

#include <cmath>

namespace gcov {

AutocovMatrix sample_autocov(const SeriesMatrix& series, Eigen::Index h) {
    const Eigen::MatrixXd& y = series.values();
    const Eigen::Index T = y.cols();
    if (h < 0 || h > T - 2)
        throw LagTooLarge("lag " + std::to_string(h) + " too large for T = " +
                          std::to_string(T));

    const Eigen::VectorXd mean = y.rowwise().mean();
    const Eigen::MatrixXd yc = y.colwise() - mean;

    // Zero-variance guard on the full-sample deviations.
    for (Eigen::Index k = 0; k < y.rows(); ++k) {
        const double var_k = yc.row(k).squaredNorm() / static_cast<double>(T);
        if (var_k <= 1e-24 * (1.0 + mean(k) * mean(k)))
            throw DegenerateSeries("component " + std::to_string(k) +
                                   " has zero variance");
    }

    const Eigen::Index n = T - h;
    Eigen::MatrixXd g =
        (yc.rightCols(n) * yc.leftCols(n).transpose()) / static_cast<double>(n);
    if (h == 0) g = 0.5 * (g + g.transpose()).eval();
    return AutocovMatrix{h, std::move(g)};
}

namespace detail {

Eigen::MatrixXd inverse_sqrt_spd(const Eigen::MatrixXd& gamma_0) {
    const Eigen::MatrixXd sym = 0.5 * (gamma_0 + gamma_0.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success)
        throw IllConditioned("eigendecomposition of gamma_0 failed");
    const Eigen::VectorXd& lam = es.eigenvalues();
    const double lam_max = lam.maxCoeff();
    const double lam_min = lam.minCoeff();
    if (lam_min <= 0.0 || lam_max / lam_min >= kConditionLimit)
        throw IllConditioned("gamma_0 condition estimate exceeds limit");
    return es.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
}

}  // namespace detail

double trace_r2(const AutocovMatrix& gamma_h, const AutocovMatrix& gamma_0) {
    if (gamma_h.gamma.rows() != gamma_0.gamma.rows() ||
        gamma_h.gamma.cols() != gamma_0.gamma.cols())
        throw ShapeMismatch("gamma_h and gamma_0 dimensions differ");
    const Eigen::MatrixXd s = detail::inverse_sqrt_spd(gamma_0.gamma);
    return (s * gamma_h.gamma * s).squaredNorm();
}

Eigen::VectorXd canonical_correlations_sq(const AutocovMatrix& gamma_h,
                                          const AutocovMatrix& gamma_0) {
    const Eigen::MatrixXd s = detail::inverse_sqrt_spd(gamma_0.gamma);
    const Eigen::MatrixXd x = s * gamma_h.gamma * s;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x * x.transpose());
    if (es.info() != Eigen::Success)
        throw IllConditioned("eigendecomposition of the R^2 form failed");
    return es.eigenvalues().reverse();
}

double portmanteau_xi(const SeriesMatrix& series, int H) {
    if (H < 1) throw DomainError("portmanteau_xi requires H >= 1");
    const Eigen::Index T = series.length();
    if (T <= H + 1)
        throw TooShort("series length " + std::to_string(T) +
                       " too short for H = " + std::to_string(H));
    const AutocovMatrix g0 = sample_autocov(series, 0);
    double sum = 0.0;
    for (int h = 1; h <= H; ++h) sum += trace_r2(sample_autocov(series, h), g0);
    return static_cast<double>(T) * sum;
}

double vec_kron_quadform(const AutocovMatrix& gamma_1, const AutocovMatrix& gamma_0) {
    const Eigen::Index K = gamma_0.gamma.rows();
    const Eigen::MatrixXd s = detail::inverse_sqrt_spd(gamma_0.gamma);
    const Eigen::MatrixXd g0_inv = s * s;

    const Eigen::MatrixXd b = g0_inv * gamma_1.gamma.transpose();
    const Eigen::VectorXd vb = Eigen::Map<const Eigen::VectorXd>(b.data(), K * K);

    Eigen::MatrixXd w(K * K, K * K);
    for (Eigen::Index i = 0; i < K; ++i)
        for (Eigen::Index j = 0; j < K; ++j)
            w.block(i * K, j * K, K, K) = g0_inv(i, j) * gamma_0.gamma;
    return vb.dot(w * vb);
}

}  // namespace gcov
