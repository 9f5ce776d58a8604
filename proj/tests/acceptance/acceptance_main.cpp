// Acceptance suite: one line per criterion, strict published tolerances.
// Runs everything even after a failure and exits with the failure count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "gcov/chi_square.hpp"
#include "gcov/diagnostics.hpp"
#include "gcov/estimator.hpp"
#include "gcov/simulation.hpp"
#include "gcov/stats.hpp"
#include "gcov/transforms.hpp"

#include "../helpers.hpp"

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass,
            const std::string& detail, double seconds) {
    std::printf("[%s] criterion %d: %s (%s) [%.1fs]\n", pass ? "PASS" : "FAIL",
                number, name.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void run(int number, const std::string& name,
         const std::function<bool(std::string&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = false;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    report(number, name, pass, detail, secs);
}

gcov::SeriesMatrix var1_path(const Eigen::MatrixXd& phi, Eigen::Index T,
                             std::uint64_t seed) {
    gcov::RngStream rng(seed, 0);
    const Eigen::Index burn = 200;
    Eigen::MatrixXd y(phi.rows(), T + burn);
    y.col(0).setZero();
    for (Eigen::Index t = 1; t < T + burn; ++t) {
        Eigen::VectorXd e(phi.rows());
        for (Eigen::Index i = 0; i < phi.rows(); ++i) e(i) = rng.normal();
        y.col(t) = phi * y.col(t - 1) + e;
    }
    return gcov::SeriesMatrix(y.rightCols(T));
}

// --------------------------------------------------------------------------

bool identity_suite(std::string& detail) {
    double worst = 0.0;

    // Trace / eigenvalue identity and the vec/Kronecker form.
    for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
        const auto series = testutil::random_series(3, 240, seed);
        const auto g0 = gcov::sample_autocov(series, 0);
        const auto g1 = gcov::sample_autocov(series, 1);
        const double tr = gcov::trace_r2(g1, g0);
        const double eig_sum = gcov::canonical_correlations_sq(g1, g0).sum();
        if (std::fabs(tr - eig_sum) > 1e-10) {
            detail = "trace/eigenvalue gap " + std::to_string(tr - eig_sum);
            return false;
        }
        const double quad = gcov::vec_kron_quadform(g1, g0);
        const double rel = std::fabs(quad - tr) / std::max(1e-300, tr);
        worst = std::max(worst, rel);
        if (rel > 1e-12) {
            detail = "vec/Kronecker relative gap " + std::to_string(rel);
            return false;
        }
    }

    // Affine invariance of the objective: the criterion computed on the
    // residual series g and on C(g - m) must coincide.
    {
        const auto model = gcov::ModelSpec::causal_var(2, 1);
        auto theta = model.param_template();
        theta.values << 0.1, 0.0, -0.05, 0.2;
        const auto data = testutil::random_series(2, 260, 9);
        const auto resid = model.residuals(theta, data).series;

        Eigen::MatrixXd c(2, 2);
        c << 1.4, -0.3, 0.25, 0.8;
        const Eigen::Vector2d m(1.5, -2.0);
        const gcov::SeriesMatrix mapped{c * (resid.values().colwise() - m)};

        auto criterion = [](const gcov::SeriesMatrix& u) {
            const auto g0 = gcov::sample_autocov(u, 0);
            double s = 0.0;
            for (int h = 1; h <= 3; ++h)
                s += gcov::trace_r2(gcov::sample_autocov(u, h), g0);
            return s;
        };
        const double base = criterion(resid);
        const double after = criterion(mapped);
        if (std::fabs(after - base) > 1e-10 * std::max(1.0, base)) {
            detail = "affine invariance gap " + std::to_string(after - base);
            return false;
        }
    }

    // sur_xi(H=1) = weak_wn(H=1), exactly.
    {
        const auto series = testutil::random_series(2, 300, 12);
        const double a = gcov::weak_wn_test(series, 1).statistic;
        const double b = gcov::sur_xi(series, 1).statistic;
        if (a != b) {
            detail = "sur/weak-wn H=1 mismatch";
            return false;
        }
    }

    // Discretization chi-square identity.
    {
        const auto raw = testutil::ar1_series(0.5, 500, 14);
        const auto ind = gcov::apply_transforms(
            raw, {gcov::TransformTag::indicator({-0.7, 0.0, 0.7})});
        const auto g0 = gcov::sample_autocov(ind, 0);
        const Eigen::Index K = ind.components();
        Eigen::VectorXd p(K + 1);
        for (Eigen::Index k = 0; k < K; ++k) p(k) = ind.values().row(k).mean();
        p(K) = 1.0 - p.head(K).sum();
        double tr_sum = 0.0, chi_sum = 0.0;
        for (int h = 1; h <= 3; ++h) {
            const auto gh = gcov::sample_autocov(ind, h);
            tr_sum += gcov::trace_r2(gh, g0);
            Eigen::MatrixXd c(K + 1, K + 1);
            c.topLeftCorner(K, K) = gh.gamma;
            for (Eigen::Index i = 0; i < K; ++i) c(i, K) = -gh.gamma.row(i).sum();
            for (Eigen::Index j = 0; j < K; ++j) c(K, j) = -gh.gamma.col(j).sum();
            c(K, K) = gh.gamma.sum();
            for (Eigen::Index i = 0; i <= K; ++i)
                for (Eigen::Index j = 0; j <= K; ++j)
                    chi_sum += c(i, j) * c(i, j) / (p(i) * p(j));
        }
        if (std::fabs(tr_sum - chi_sum) > 1e-10) {
            detail = "discretization gap " + std::to_string(tr_sum - chi_sum);
            return false;
        }
    }

    detail = "all identities within tolerance";
    return true;
}

bool ols_equivalence(std::string& detail) {
    Eigen::MatrixXd phi(2, 2);
    phi << 0.5, 0.1, 0.2, 0.3;
    const auto model = gcov::ModelSpec::causal_var(2, 1);
    gcov::GcovOptions opts;
    opts.H = 1;
    opts.seed = 3;
    // The just-identified system has several exact roots; descend from the
    // OLS-implied start only, which selects the causal one.
    opts.multistart = 0;

    double worst_theta_gap = 0.0;
    double worst_moment = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto data = var1_path(phi, 500, 1000 + seed);
        const auto res = gcov::gcov_estimate(model, data, opts);

        const auto u = model.residuals(res.theta_hat, data).series;
        worst_moment = std::max(
            worst_moment,
            gcov::sample_autocov(u, 1).gamma.lpNorm<Eigen::Infinity>());

        // Least-squares oracle on the estimation window.
        const Eigen::MatrixXd& y = data.values();
        const Eigen::MatrixXd x = y.leftCols(y.cols() - 1);
        const Eigen::MatrixXd b = ((x * x.transpose())
                                       .ldlt()
                                       .solve(x * y.rightCols(y.cols() - 1)
                                                      .transpose()))
                                      .transpose();
        for (Eigen::Index i = 0; i < 2; ++i)
            for (Eigen::Index j = 0; j < 2; ++j)
                worst_theta_gap =
                    std::max(worst_theta_gap,
                             std::fabs(res.theta_hat.values(i * 2 + j) - b(i, j)));
    }

    detail = "max|theta - OLS| = " + std::to_string(worst_theta_gap) +
             " (tolerance 1e-4), max|Gamma1(theta)| = " +
             std::to_string(worst_moment) + " (tolerance 1e-6)";
    return worst_theta_gap <= 1e-4 && worst_moment <= 1e-6;
}

bool weak_wn_size(std::string& detail) {
    const int n_seeds = 500;
    const int H = 10;
    int rejections = 0;
    double mean_stat = 0.0;
    const double q95 = 18.307;  // chi2(10) 95% quantile
    for (int s = 0; s < n_seeds; ++s) {
        const auto series = testutil::random_series(1, 1000, 20000 + s);
        const double stat = gcov::portmanteau_xi(series, H);
        mean_stat += stat;
        if (stat > q95) ++rejections;
    }
    mean_stat /= n_seeds;
    const double rate = static_cast<double>(rejections) / n_seeds;
    detail = "rejection rate " + std::to_string(rate) + " in [0.03, 0.072], mean " +
             std::to_string(mean_stat) + " in [8.5, 11.5]";
    return rate >= 0.03 && rate <= 0.072 && mean_stat >= 8.5 && mean_stat <= 11.5;
}

bool prop3_df_adjustment(std::string& detail) {
    const auto model = gcov::ModelSpec::mar(1, 0);  // pure causal AR(1)
    gcov::GcovOptions opts;
    opts.H = 10;
    opts.seed = 5;
    opts.multistart = 2;

    const int n_seeds = 300;
    int used = 0, rejections = 0;
    double mean_stat = 0.0;
    const double q95 = 16.919;  // chi2(9) 95% quantile
    for (int s = 0; s < n_seeds; ++s) {
        const auto data = testutil::ar1_series(0.5, 1000, 30000 + s);
        const auto res = gcov::gcov_estimate(model, data, opts);
        if (!res.converged) continue;
        ++used;
        mean_stat += res.statistic;
        if (res.statistic > q95) ++rejections;
    }
    mean_stat /= used;
    const double rate = static_cast<double>(rejections) / used;
    detail = "mean statistic " + std::to_string(mean_stat) +
             " in [7.6, 10.4], rejection rate " + std::to_string(rate) +
             " in [0.03, 0.075], " + std::to_string(used) + "/300 converged";
    return used >= 290 && mean_stat >= 7.6 && mean_stat <= 10.4 &&
           rate >= 0.03 && rate <= 0.075;
}

bool arch_table_cell(std::string& detail) {
    gcov::MonteCarloOptions opts;
    opts.T = 400;
    opts.replications = 100;
    opts.estimation.H = 3;
    opts.estimation.seed = 7;
    const auto table =
        gcov::run_monte_carlo(gcov::SimFamily::ar_arch, {{0.5, 0.5}}, opts);
    const auto& cell = table.cells.at(0);
    detail = "mean a = " + std::to_string(cell.mean(0)) +
             " in [0.40, 0.57], mean alpha = " + std::to_string(cell.mean(1)) +
             " in [0.28, 0.81], failures " + std::to_string(cell.failures);
    return !cell.flagged && cell.mean(0) >= 0.40 && cell.mean(0) <= 0.57 &&
           cell.mean(1) >= 0.28 && cell.mean(1) <= 0.81;
}

bool mar_table_cell(std::string& detail) {
    gcov::MonteCarloOptions opts;
    opts.T = 400;
    opts.replications = 100;
    opts.nu = 6.0;
    opts.estimation.H = 3;
    opts.estimation.seed = 11;
    const auto table =
        gcov::run_monte_carlo(gcov::SimFamily::mar, {{0.3, 0.3}}, opts);
    const auto& cell = table.cells.at(0);
    detail = "mean phi = " + std::to_string(cell.mean(0)) +
             " in [0.04, 0.55], mean psi = " + std::to_string(cell.mean(1)) +
             " in [0.05, 0.52], failures " + std::to_string(cell.failures);
    return !cell.flagged && cell.mean(0) >= 0.04 && cell.mean(0) <= 0.55 &&
           cell.mean(1) >= 0.05 && cell.mean(1) <= 0.52;
}

bool covariance_sanity(std::string& detail) {
    const auto model = gcov::ModelSpec::mar(1, 0);
    gcov::GcovOptions opts;
    opts.H = 1;
    opts.seed = 13;
    opts.multistart = 2;

    std::vector<double> a_hats;
    double se_sum = 0.0;
    for (int s = 0; s < 200; ++s) {
        const auto data = testutil::ar1_series(0.5, 400, 40000 + s);
        const auto res = gcov::gcov_estimate(model, data, opts);
        if (!res.converged) continue;
        a_hats.push_back(res.theta_hat.values(0));
        se_sum += std::sqrt(res.cov_corollary1(0, 0));
    }
    const double mean =
        std::accumulate(a_hats.begin(), a_hats.end(), 0.0) / a_hats.size();
    double var = 0.0;
    for (double a : a_hats) var += (a - mean) * (a - mean);
    var /= static_cast<double>(a_hats.size() - 1);
    const double ratio = std::sqrt(var) / (se_sum / a_hats.size());
    detail = "empirical std / mean reported SE = " + std::to_string(ratio) +
             " in [0.75, 1.33] over " + std::to_string(a_hats.size()) + " fits";
    return a_hats.size() >= 195 && ratio >= 0.75 && ratio <= 1.33;
}

bool pi_projector(std::string& detail) {
    const auto model = gcov::ModelSpec::mar(1, 0);
    const auto data = testutil::ar1_series(0.5, 500, 17);
    auto theta = model.param_template();
    theta.values(0) = 0.5;
    const int H = 5;

    const Eigen::MatrixXd z = gcov::autocov_jacobian(model, theta, data, H);
    const auto u = model.residuals(theta, data).series;
    const double g0 = gcov::sample_autocov(u, 0).gamma(0, 0);

    const Eigen::MatrixXd w = Eigen::MatrixXd::Identity(H, H) / (g0 * g0);
    const Eigen::MatrixXd m = z.transpose() * w * z;
    const Eigen::MatrixXd pi = w - w * z * m.inverse() * z.transpose() * w;
    const Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(H, H) * (g0 * g0);
    const double gap = (pi * sigma * pi - pi).norm();
    detail = "|Pi Sigma Pi - Pi| = " + std::to_string(gap) + " vs 1e-6 |Pi| = " +
             std::to_string(1e-6 * pi.norm());
    return gap <= 1e-6 * pi.norm();
}

bool chi2_oracle_grid(std::string& detail) {
    double worst = 0.0;
    for (int df = 1; df <= 30; ++df) {
        for (int i = 0; i <= 20; ++i) {
            const double x = 5.0 * df * i / 20.0;
            const double err =
                std::fabs(gcov::chi2_sf(x, df) - testutil::chi2_sf_oracle(x, df));
            worst = std::max(worst, err);
        }
    }
    detail = "max abs error " + std::to_string(worst) + " vs 1e-8";
    return worst <= 1e-8;
}

}  // namespace

int main() {
    std::printf("GCov acceptance suite\n");
    run(1, "identity suite", identity_suite);
    run(2, "OLS equivalence for the causal VAR(1)", ols_equivalence);
    run(3, "weak white noise test size", weak_wn_size);
    run(4, "residual-based test df adjustment", prop3_df_adjustment);
    run(5, "AR(1)-ARCH(1) grid cell (0.5, 0.5)", arch_table_cell);
    run(6, "MAR(1,1) grid cell (0.3, 0.3)", mar_table_cell);
    run(7, "asymptotic covariance sanity", covariance_sanity);
    run(8, "Pi projector property", pi_projector);
    run(9, "chi-square tail vs quadrature oracle", chi2_oracle_grid);

    if (g_failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criterion(s) failed\n", g_failures);
    }
    return g_failures;
}
