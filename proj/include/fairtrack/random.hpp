#pragma once

#include <cstdint>
#include <random>

namespace fairtrack {

/// Seeded, splittable generator. A 64-bit Mersenne twister underneath; the
/// real-valued conversions are written out here rather than taken from
/// <random> distributions so that streams are identical across standard
/// libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Independent child stream; the same (seed, stream) always yields the same child.
    Rng split(std::uint64_t stream) const;

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer on [lo, hi].
    int uniform_int(int lo, int hi);
    /// Standard normal (Box-Muller).
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }
    bool bernoulli(double p) { return uniform() < p; }
    /// Knuth's product-of-uniforms sampler; fine for the small rates used here.
    int poisson(double lambda);

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace fairtrack
