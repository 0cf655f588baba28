#pragma once

#include <cstdint>
#include <cmath>

namespace qmaps {

// Counter-based pseudo-random stream.  Every value is a pure function of the
// seeding key and the draw counter, so draws keyed by (master_seed,
// realization, gate index) are reproducible independently of evaluation
// order, thread count, or platform.
//
// The generator is SplitMix64: a Weyl sequence passed through a 64-bit
// avalanche finalizer.  Keys derived from different (seed, stream) pairs are
// decorrelated by running the ingredients through the same finalizer.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b = 0)
        : state_(mix(mix(mix(seed) ^ stream_a) ^ stream_b)) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal pair via Box-Muller (no stdlib distribution, whose
    // output is implementation-defined).
    void next_gaussian_pair(double& g0, double& g1) {
        double u1 = 1.0 - next_uniform();  // (0, 1]
        double u2 = next_uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        g0 = r * std::cos(6.283185307179586476925286766559 * u2);
        g1 = r * std::sin(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint64_t state_;
};

}  // namespace qmaps
