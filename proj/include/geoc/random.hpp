#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace geoc {

// Platform-independent generator used for every seeded stream in the library.
//
// State advances by the golden-ratio increment and each output is the
// splitmix64 finalizer of the new state. Uniforms take the top 53 bits.
// Gaussians use the cosine branch of Box-Muller, consuming two uniforms per
// draw, so a stream never carries hidden cached state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        // 1 - u keeps the log argument in (0, 1].
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Uniform integer in [0, bound). Bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        // Lemire's multiply-shift; the tiny bias is irrelevant for shuffling.
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

private:
    std::uint64_t state_;
};

}  // namespace geoc
