#include "gcov/rng.hpp"

#include <cmath>
#include <limits>

#include "gcov/errors.hpp"

namespace gcov {
namespace {

// splitmix64 finalizer; decorrelates nearby (seed, stream) pairs.
std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t RngStream::mix(std::uint64_t seed, std::uint64_t stream_id) {
    return splitmix(splitmix(seed) ^ splitmix(stream_id * 0xda942042e4dd58b5ULL + 1));
}

double RngStream::student_t(double nu) {
    if (!(nu > 0.0)) throw DomainError("student_t requires nu > 0");
    const double z = normal_(engine_);
    if (std::isinf(nu)) return z;
    const double v = std::chi_squared_distribution<double>(nu)(engine_);
    return z / std::sqrt(v / nu);
}

}  // namespace gcov
