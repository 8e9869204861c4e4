#pragma once

#include <cstdint>
#include <cmath>

namespace vortsdf {

// SplitMix64 finalizer. Statistically strong enough for sampling duties here
// and, unlike stateful engines, gives the same stream for the same key no
// matter how work is scheduled across threads.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Counter-based RNG: every draw is keyed by (seed, a, b, c, d). Draws are
// independent of evaluation order, which keeps parallel schedules
// reproducible.
struct CounterRng {
    uint64_t seed = 0;

    explicit CounterRng(uint64_t s = 0) : seed(s) {}

    uint64_t bits(uint64_t a, uint64_t b = 0, uint64_t c = 0, uint64_t d = 0) const {
        uint64_t h = mix64(seed ^ 0x2545f4914f6cdd1dull);
        h = mix64(h ^ a);
        h = mix64(h ^ b);
        h = mix64(h ^ c);
        h = mix64(h ^ d);
        return h;
    }

    // Uniform in [0, 1).
    double uniform(uint64_t a, uint64_t b = 0, uint64_t c = 0, uint64_t d = 0) const {
        return static_cast<double>(bits(a, b, c, d) >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform_in(double lo, double hi, uint64_t a, uint64_t b = 0, uint64_t c = 0,
                      uint64_t d = 0) const {
        return lo + (hi - lo) * uniform(a, b, c, d);
    }

    // Integer in [0, n). n must be > 0.
    uint64_t index(uint64_t n, uint64_t a, uint64_t b = 0, uint64_t c = 0, uint64_t d = 0) const {
        return bits(a, b, c, d) % n;
    }

    // Standard normal via Box-Muller; uses two sub-draws of the same key.
    double normal(uint64_t a, uint64_t b = 0, uint64_t c = 0, uint64_t d = 0) const {
        double u1 = uniform(a, b, c, d ^ 0x9e3779b97f4a7c15ull);
        double u2 = uniform(a, b, c, d ^ 0x5851f42d4c957f2dull);
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }
};

}  // namespace vortsdf
