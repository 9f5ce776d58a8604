#include "gcov/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

namespace gcov {
namespace {

constexpr Eigen::Index kBurnIn = 500;
constexpr double kTailMass = 1e-8;

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GCOV_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

// Expansion coefficients of (1 - sum_j c_j z^j)^{-1} up to order m.
Eigen::VectorXd inverse_filter_coeffs(const Eigen::VectorXd& c, Eigen::Index m) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m + 1);
    out(0) = 1.0;
    for (Eigen::Index k = 1; k <= m; ++k) {
        double acc = 0.0;
        for (Eigen::Index j = 1; j <= std::min<Eigen::Index>(c.size(), k); ++j)
            acc += c(j - 1) * out(k - j);
        out(k) = acc;
    }
    return out;
}

}  // namespace

double sample_student_t(double nu, RngStream& rng) { return rng.student_t(nu); }

SimulatedSeries simulate_ar_arch(double a1, double alpha1, Eigen::Index T,
                                 RngStream& rng) {
    if (T < 10) throw TooShort("simulate_ar_arch requires T >= 10");
    const Eigen::Index n = T + kBurnIn;
    Eigen::VectorXd y(n);
    double y_prev = 0.0;
    double eps_prev = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
        const double sigma = std::sqrt(std::max(0.0, 1.0 + alpha1 * eps_prev * eps_prev));
        const double eps = sigma * rng.normal();
        y(t) = a1 * y_prev + eps;
        y_prev = y(t);
        eps_prev = eps;
    }
    SimulatedSeries out{SeriesMatrix(y.tail(T).transpose()),
                        std::fabs(a1) >= 1.0 || alpha1 >= 1.0};
    return out;
}

namespace detail {

double max_inverse_root(const Eigen::VectorXd& coeffs) {
    const Eigen::Index p = coeffs.size();
    if (p == 0 || coeffs.isZero(0.0)) return 0.0;
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(p, p);
    comp.row(0) = coeffs.transpose();
    if (p > 1) comp.block(1, 0, p - 1, p - 1).setIdentity();
    return comp.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::Index mar_truncation_order(const Eigen::VectorXd& phi,
                                  const Eigen::VectorXd& psi) {
    const double lam = std::max(max_inverse_root(phi), max_inverse_root(psi));
    if (lam >= 1.0)
        throw ExplosivePolynomial("autoregressive polynomial root on or inside "
                                  "the unit circle");
    if (lam == 0.0) return 1;
    return static_cast<Eigen::Index>(
        std::ceil(std::log(kTailMass) / std::log(lam)));
}

Eigen::VectorXd mar_filter(const Eigen::VectorXd& eps, const Eigen::VectorXd& phi,
                           const Eigen::VectorXd& psi, Eigen::Index m) {
    const Eigen::Index n = eps.size();
    const Eigen::Index T = n - 2 * m;
    if (T < 1) throw TooShort("shock path too short for the truncation order");

    const Eigen::VectorXd c = inverse_filter_coeffs(phi, m);
    const Eigen::VectorXd d = inverse_filter_coeffs(psi, m);

    // Noncausal pass: w_t = sum_{k=0..m} d_k eps_{t+k}, t = 0..T+m-1.
    Eigen::VectorXd w(n - m);
    for (Eigen::Index t = 0; t < w.size(); ++t)
        w(t) = d.dot(eps.segment(t, m + 1));

    // Causal pass: y_t = sum_{k=0..m} c_k w_{t-k}, t = m..T+m-1.
    Eigen::VectorXd y(T);
    for (Eigen::Index t = 0; t < T; ++t) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k <= m; ++k) acc += c(k) * w(t + m - k);
        y(t) = acc;
    }
    return y;
}

}  // namespace detail

SeriesMatrix simulate_mar(const Eigen::VectorXd& phi, const Eigen::VectorXd& psi,
                          Eigen::Index T, double nu, RngStream& rng) {
    if (!(nu > 2.0))
        throw DomainError("simulate_mar requires nu > 2 for finite variance");
    const Eigen::Index m = detail::mar_truncation_order(phi, psi);
    Eigen::VectorXd eps(T + 2 * m);
    for (Eigen::Index t = 0; t < eps.size(); ++t) eps(t) = rng.student_t(nu);
    return SeriesMatrix(detail::mar_filter(eps, phi, psi, m).transpose());
}

namespace {

// type-7 linear interpolation on a sorted copy
double empirical_quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * (static_cast<double>(v.size()) - 1.0);
    const auto lo = static_cast<size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

}  // namespace

MonteCarloTable run_monte_carlo(SimFamily family, const std::vector<GridCell>& grid,
                                const MonteCarloOptions& opts) {
    if (opts.replications < 2)
        throw DomainError("run_monte_carlo requires replications >= 2");

    MonteCarloTable table;
    table.family = family;

    ModelSpec model =
        family == SimFamily::ar_arch
            ? ModelSpec::ar_arch()
            : ModelSpec::mar(1, 1,
                             {TransformTag::identity(), TransformTag::square()});
    table.param_names = model.param_template().names;
    const Eigen::Index J = model.param_template().dim();

    const int R = opts.replications;
    const auto n_items = static_cast<std::size_t>(grid.size()) * R;
    std::vector<Eigen::VectorXd> estimates(n_items);
    std::vector<char> ok(n_items, 0);

    auto run_item = [&](std::size_t item) {
        const std::size_t cell_idx = item / R;
        const auto rep = static_cast<int>(item % R);
        const GridCell& cell = grid[cell_idx];
        // Streams by (cell, replication) index: even ids feed the simulator,
        // odd ids feed the estimator's start draws.
        RngStream sim_rng(opts.estimation.seed, 2 * item);
        try {
            SeriesMatrix path =
                family == SimFamily::ar_arch
                    ? simulate_ar_arch(cell.first, cell.second, opts.T, sim_rng)
                          .series
                    : simulate_mar(Eigen::VectorXd::Constant(1, cell.first),
                                   Eigen::VectorXd::Constant(1, cell.second),
                                   opts.T, opts.nu, sim_rng);
            GcovOptions est = opts.estimation;
            est.seed = RngStream(opts.estimation.seed, 2 * item + 1).engine()();
            const EstimationResult res = gcov_estimate(model, path, est);
            if (res.converged && res.theta_hat.values.allFinite()) {
                estimates[item] = res.theta_hat.values;
                ok[item] = 1;
            }
        } catch (const Error&) {
            // counted as a failure below
        }
        (void)rep;
    };

    const int n_threads = std::min<int>(resolve_threads(opts.threads),
                                        static_cast<int>(n_items));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < n_items; ++i) run_item(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int w = 0; w < n_threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < n_items;
                     i = next.fetch_add(1))
                    run_item(i);
            });
        for (auto& th : pool) th.join();
    }

    for (std::size_t c = 0; c < grid.size(); ++c) {
        MonteCarloCell out;
        out.cell = grid[c];
        std::vector<std::vector<double>> coords(J);
        for (int rep = 0; rep < R; ++rep) {
            const std::size_t item = c * R + rep;
            if (!ok[item]) {
                ++out.failures;
                continue;
            }
            for (Eigen::Index j = 0; j < J; ++j)
                coords[j].push_back(estimates[item](j));
        }
        out.replications = R - out.failures;
        out.flagged = out.failures * 10 > R;
        out.mean = Eigen::VectorXd::Zero(J);
        out.quantile_5 = Eigen::VectorXd::Zero(J);
        out.quantile_95 = Eigen::VectorXd::Zero(J);
        if (out.replications > 0) {
            for (Eigen::Index j = 0; j < J; ++j) {
                const auto& v = coords[j];
                out.mean(j) =
                    std::accumulate(v.begin(), v.end(), 0.0) / v.size();
                out.quantile_5(j) = empirical_quantile(v, 0.05);
                out.quantile_95(j) = empirical_quantile(v, 0.95);
            }
        }
        table.cells.push_back(std::move(out));
    }
    return table;
}

}  // namespace gcov
