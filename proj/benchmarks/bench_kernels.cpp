#include <benchmark/benchmark.h>

#include "gcov/estimator.hpp"
#include "gcov/rng.hpp"
#include "gcov/simulation.hpp"
#include "gcov/stats.hpp"

namespace {

gcov::SeriesMatrix make_series(Eigen::Index K, Eigen::Index T) {
    gcov::RngStream rng(7, 0);
    Eigen::MatrixXd v(K, T);
    for (Eigen::Index i = 0; i < K; ++i)
        for (Eigen::Index t = 0; t < T; ++t) v(i, t) = rng.normal();
    return gcov::SeriesMatrix(std::move(v));
}

void BM_sample_autocov(benchmark::State& state) {
    const auto series = make_series(state.range(0), state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(gcov::sample_autocov(series, 1));
}
BENCHMARK(BM_sample_autocov)->Args({2, 400})->Args({3, 1000})->Args({5, 5000});

void BM_portmanteau_xi(benchmark::State& state) {
    const auto series = make_series(state.range(0), 1000);
    for (auto _ : state)
        benchmark::DoNotOptimize(gcov::portmanteau_xi(series, 10));
}
BENCHMARK(BM_portmanteau_xi)->Arg(1)->Arg(3);

void BM_gcov_objective_ar_arch(benchmark::State& state) {
    gcov::RngStream rng(11, 0);
    const auto path = gcov::simulate_ar_arch(0.5, 0.5, state.range(0), rng);
    const auto model = gcov::ModelSpec::ar_arch();
    auto theta = model.param_template();
    theta.values << 0.4, 0.4;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            gcov::gcov_objective(model, theta, path.series, 3));
}
BENCHMARK(BM_gcov_objective_ar_arch)->Arg(400)->Arg(2000);

void BM_simulate_mar(benchmark::State& state) {
    const Eigen::VectorXd phi = Eigen::VectorXd::Constant(1, 0.3);
    const Eigen::VectorXd psi = Eigen::VectorXd::Constant(1, 0.3);
    for (auto _ : state) {
        gcov::RngStream rng(13, 1);
        benchmark::DoNotOptimize(
            gcov::simulate_mar(phi, psi, state.range(0), 6.0, rng));
    }
}
BENCHMARK(BM_simulate_mar)->Arg(400)->Arg(4000);

}  // namespace

BENCHMARK_MAIN();
