#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace mvp {

/// Seeded pseudo-random source owned by a single run.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard.
/// The distribution helpers below are written out by hand because the
/// standard library distributions are implementation-defined, and runs must
/// replay identically across toolchains.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n), n >= 1. Rejection keeps it unbiased.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Draws an index from a probability vector by inverse CDF.
    /// Round-off that leaves the cumulative sum short of u falls back to the
    /// last index with positive mass.
    int categorical(std::span<const double> probs) {
        const double u = uniform();
        double acc = 0.0;
        int last_positive = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] <= 0.0) continue;
            last_positive = static_cast<int>(i);
            acc += probs[i];
            if (u < acc) return static_cast<int>(i);
        }
        return last_positive;
    }

    /// Standard exponential variate, used for Dirichlet draws.
    double exponential() { return -std::log1p(-uniform()); }

private:
    std::mt19937_64 engine_;
};

}  // namespace mvp
