#pragma once

#include <cstdint>
#include <random>

namespace gcov {

/**
 * @brief A reproducible substream of a seeded generator.
 *
 * Distinct stream ids under the same seed yield statistically independent
 * sequences; the (seed, stream_id) pair fully determines the draws, so work
 * can be fanned out to threads without losing reproducibility.
 */
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : engine_(mix(seed, stream_id)) {}

    std::mt19937_64& engine() { return engine_; }

    double normal() { return normal_(engine_); }

    double uniform(double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(engine_);
    }

    /// Standard Student-t via N(0,1) / sqrt(chi2(nu)/nu); nu = inf gives N(0,1).
    double student_t(double nu);

private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream_id);

    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace gcov
