#include "gcov/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "gcov/chi_square.hpp"

namespace gcov {

TestReport weak_wn_test(const SeriesMatrix& series, int H) {
    TestReport rep;
    rep.kind = TestKind::weak_wn;
    rep.H = H;
    rep.K = series.components();
    rep.statistic = portmanteau_xi(series, H);

    const int K = static_cast<int>(rep.K);
    rep.df = K * K * H;
    rep.p_value = chi2_sf(rep.statistic, rep.df);
    if (K > 1) {
        rep.has_alt_df = true;
        rep.df_alt = K * H;
        rep.p_value_alt = chi2_sf(rep.statistic, rep.df_alt);
    }
    return rep;
}

TestReport sur_xi(const SeriesMatrix& series, int H) {
    if (H < 1) throw DomainError("sur_xi requires H >= 1");
    const Eigen::Index K = series.components();
    const Eigen::Index T = series.length();
    if (T <= K * H + 1) throw TooShort("series too short for the SUR statistic");

    // Gamma*(1) = [G(1) ... G(H)] and Gamma*(0) = block-Toeplitz of G(j - i),
    // built from the same kernel estimates so the H = 1 case reduces exactly.
    std::vector<Eigen::MatrixXd> g(H + 1);
    for (int h = 0; h <= H; ++h) g[h] = sample_autocov(series, h).gamma;

    Eigen::MatrixXd gstar1(K, K * H);
    for (int h = 1; h <= H; ++h) gstar1.middleCols((h - 1) * K, K) = g[h];

    Eigen::MatrixXd gstar0(K * H, K * H);
    for (int i = 0; i < H; ++i)
        for (int j = 0; j < H; ++j) {
            const int d = j - i;
            gstar0.block(i * K, j * K, K, K) =
                d >= 0 ? g[d] : Eigen::MatrixXd(g[-d].transpose());
        }

    // Tr[C Vz^{-1} C' Vy^{-1}] = ||Sy C Sz||_F^2 with the inverse square
    // roots of the two variance blocks; for H = 1 both blocks are Gamma(0)
    // and the expression reduces to the weak-WN trace exactly.
    const Eigen::MatrixXd sz = detail::inverse_sqrt_spd(gstar0);
    const Eigen::MatrixXd sy = detail::inverse_sqrt_spd(g[0]);

    TestReport rep;
    rep.kind = TestKind::sur;
    rep.H = H;
    rep.K = K;
    rep.statistic =
        static_cast<double>(T) * (sy * gstar1 * sz).squaredNorm();
    rep.df = static_cast<int>(K * K) * H;
    rep.p_value = chi2_sf(rep.statistic, rep.df);
    return rep;
}

TestReport residual_based_test(const EstimationResult& result) {
    if (!result.converged)
        throw NoConvergence("residual-based test requires a converged estimate");
    TestReport rep;
    rep.kind = TestKind::residual_based;
    rep.H = result.H;
    rep.K = result.K;
    rep.statistic = result.statistic;
    rep.df = result.df;
    rep.df_exhausted = result.df_exhausted;
    rep.p_value = result.df_exhausted
                      ? std::numeric_limits<double>::quiet_NaN()
                      : result.p_value;
    return rep;
}

std::vector<Eigen::MatrixXd> acf(const SeriesMatrix& series, int max_lag) {
    if (max_lag < 0 || max_lag > series.length() - 2)
        throw LagTooLarge("max_lag out of range");
    const Eigen::MatrixXd g0 = sample_autocov(series, 0).gamma;
    const Eigen::VectorXd d_inv_sqrt = g0.diagonal().cwiseSqrt().cwiseInverse();

    std::vector<Eigen::MatrixXd> out;
    out.reserve(max_lag + 1);
    for (int h = 0; h <= max_lag; ++h) {
        const Eigen::MatrixXd gh = sample_autocov(series, h).gamma;
        out.push_back(d_inv_sqrt.asDiagonal() * gh * d_inv_sqrt.asDiagonal());
    }
    return out;
}

}  // namespace gcov
