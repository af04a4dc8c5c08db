#pragma once

#include <cmath>
#include <cstdint>

#include "sadir/types.hpp"

namespace sadir {

/// SplitMix64: tiny, fast, splittable 64-bit generator with a fully
/// specified update, so streams are reproducible across platforms.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed = 0) : state(seed) {}

    uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

/// Standard-normal sampler: Box-Muller on SplitMix64 uniforms. Generates
/// pairs and caches the spare so a stream of n draws costs n/2 transforms.
struct GaussianSampler {
    SplitMix64 rng;
    double spare = 0.0;
    bool has_spare = false;

    explicit GaussianSampler(uint64_t seed = 0) : rng(seed) {}

    double next() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        // u1 in (0,1] so log() stays finite.
        double u1 = 1.0 - rng.next_double();
        double u2 = rng.next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * kPi * u2;
        spare = r * std::sin(a);
        has_spare = true;
        return r * std::cos(a);
    }

    double next(double mean, double stddev) { return mean + stddev * next(); }
};

}  // namespace sadir
