#include "gcov/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace gcov {
namespace {

Eigen::VectorXd clamp_box(Eigen::VectorXd x, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi) {
    for (Eigen::Index j = 0; j < x.size(); ++j)
        x(j) = std::min(hi(j), std::max(lo(j), x(j)));
    return x;
}

}  // namespace

OptimResult nelder_mead(const ObjectiveFn& f, const Eigen::VectorXd& x0,
                        const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                        const OptimOptions& opts) {
    const Eigen::Index n = x0.size();
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    std::vector<Eigen::VectorXd> xs;
    std::vector<double> fs;
    xs.reserve(n + 1);
    xs.push_back(clamp_box(x0, lower, upper));
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::VectorXd x = xs[0];
        double step = std::max(0.05, 0.1 * std::fabs(x(j)));
        if (x(j) + step > upper(j)) step = -step;
        x(j) += step;
        xs.push_back(clamp_box(x, lower, upper));
    }
    fs.resize(n + 1);
    for (Eigen::Index i = 0; i <= n; ++i) fs[i] = f(xs[i]);

    std::vector<Eigen::Index> order(n + 1);
    int iter = 0;
    bool converged = false;

    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](Eigen::Index a, Eigen::Index b) { return fs[a] < fs[b]; });
    };

    for (; iter < opts.max_iter; ++iter) {
        sort_simplex();
        const Eigen::Index best = order[0], worst = order[n], second = order[n - 1];

        double diameter = 0.0;
        for (Eigen::Index i = 1; i <= n; ++i)
            diameter = std::max(diameter, (xs[order[i]] - xs[best]).norm());
        const double spread = fs[worst] - fs[best];
        if (spread <= opts.f_tol * std::max(1.0, std::fabs(fs[best])) ||
            diameter <= opts.x_tol) {
            converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i <= n; ++i)
            if (i != worst) centroid += xs[i];
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd xr =
            clamp_box(centroid + alpha * (centroid - xs[worst]), lower, upper);
        const double fr = f(xr);

        if (fr < fs[best]) {
            const Eigen::VectorXd xe =
                clamp_box(centroid + gamma * (centroid - xs[worst]), lower, upper);
            const double fe = f(xe);
            if (fe < fr) {
                xs[worst] = xe;
                fs[worst] = fe;
            } else {
                xs[worst] = xr;
                fs[worst] = fr;
            }
        } else if (fr < fs[second]) {
            xs[worst] = xr;
            fs[worst] = fr;
        } else {
            const bool outside = fr < fs[worst];
            const Eigen::VectorXd base = outside ? xr : xs[worst];
            const Eigen::VectorXd xc =
                clamp_box(centroid + rho * (base - centroid), lower, upper);
            const double fc = f(xc);
            if (fc < std::min(fr, fs[worst])) {
                xs[worst] = xc;
                fs[worst] = fc;
            } else {
                for (Eigen::Index i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    xs[i] = clamp_box(xs[best] + sigma * (xs[i] - xs[best]), lower,
                                      upper);
                    fs[i] = f(xs[i]);
                }
            }
        }
    }

    sort_simplex();
    OptimResult out;
    out.x = xs[order[0]];
    out.f = fs[order[0]];
    out.iterations = iter;
    out.converged = converged;
    return out;
}

Eigen::VectorXd fd_gradient(const ObjectiveFn& f, const Eigen::VectorXd& x,
                            double step_scale) {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double eps = step_scale * std::max(1.0, std::fabs(x(j)));
        Eigen::VectorXd xp = x, xm = x;
        xp(j) += eps;
        xm(j) -= eps;
        g(j) = (f(xp) - f(xm)) / (2.0 * eps);
    }
    return g;
}

OptimResult bfgs_polish(const ObjectiveFn& f, const Eigen::VectorXd& x0,
                        const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                        const OptimOptions& opts, int max_polish_iter) {
    const Eigen::Index n = x0.size();
    Eigen::VectorXd x = clamp_box(x0, lower, upper);
    double fx = f(x);
    if (!std::isfinite(fx)) return {x, fx, 0, false};

    Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd g = fd_gradient(f, x);
    int iter = 0;
    bool converged = false;

    for (; iter < max_polish_iter; ++iter) {
        if (g.lpNorm<Eigen::Infinity>() <=
            1e-7 * std::max(1.0, std::fabs(fx))) {
            converged = true;
            break;
        }
        Eigen::VectorXd p = -h_inv * g;
        if (p.dot(g) >= 0.0) p = -g;  // reset on loss of descent direction

        double step = 1.0;
        double f_new = std::numeric_limits<double>::infinity();
        Eigen::VectorXd x_new;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            x_new = clamp_box(x + step * p, lower, upper);
            f_new = f(x_new);
            if (std::isfinite(f_new) &&
                f_new <= fx + 1e-4 * step * p.dot(g)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted || (x_new - x).norm() <= opts.x_tol * 1e-4) {
            converged = g.lpNorm<Eigen::Infinity>() <=
                        1e-4 * std::max(1.0, std::fabs(fx));
            break;
        }

        const Eigen::VectorXd g_new = fd_gradient(f, x_new);
        const Eigen::VectorXd s = x_new - x;
        const Eigen::VectorXd yv = g_new - g;
        const double sy = s.dot(yv);
        if (sy > 1e-12 * s.norm() * yv.norm()) {
            const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
            const Eigen::MatrixXd v = eye - (s * yv.transpose()) / sy;
            h_inv = v * h_inv * v.transpose() + (s * s.transpose()) / sy;
        } else {
            h_inv = Eigen::MatrixXd::Identity(n, n);
        }
        x = x_new;
        fx = f_new;
        g = g_new;
    }

    return {x, fx, iter, converged};
}

}  // namespace gcov
