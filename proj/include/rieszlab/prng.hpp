#pragma once

#include <cstdint>

#include "rieszlab/vec.hpp"

namespace rieszlab {

/// SplitMix64 generator. Used for point sampling only; kept self-contained so
/// sampled experiments replay identically on any platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed = 0x9e3779b97f4a7c15ull) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] inclusive.
    std::uint64_t uniform_index(std::uint64_t lo, std::uint64_t hi) {
        return lo + next() % (hi - lo + 1);
    }

    /// Isotropic unit vector (rejection-sampled from the cube).
    Vec unit_vector(int dim) {
        for (;;) {
            Vec v(dim);
            for (int i = 0; i < dim; ++i) v[i] = uniform(-1.0, 1.0);
            const double n2 = v.norm2();
            if (n2 > 1e-8 && n2 <= 1.0) return v * (1.0 / std::sqrt(n2));
        }
    }

    /// Point uniform in the ball B(center, radius).
    Vec in_ball(const Vec& center, double radius) {
        for (;;) {
            Vec v(center.dim());
            for (int i = 0; i < center.dim(); ++i) v[i] = uniform(-1.0, 1.0);
            if (v.norm2() <= 1.0) return center + v * radius;
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace rieszlab
