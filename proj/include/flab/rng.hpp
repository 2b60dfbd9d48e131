#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "flab/common.hpp"

namespace flab {

// Splittable deterministic RNG. All randomness in the project flows from one
// root seed through named child streams:
//
//   child(label) = splitmix(state ^ fnv1a64(label))
//   child(n)     = splitmix(state ^ (n * 0x9e3779b97f4a7c15))
//
// The generator itself is splitmix64. We avoid std::uniform_*_distribution
// on purpose: their output is implementation-defined, and runs must be
// reproducible across platforms.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(mix(seed ^ 0x6a09e667f3bcc909ull)) {}

    Rng child(std::string_view label) const { return Rng(state_ ^ fnv1a64(label), 0); }
    Rng child(uint64_t n) const { return Rng(state_ ^ (0x9e3779b97f4a7c15ull * (n + 1)), 0); }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    /// Uniform in [0,1) with 53 random bits.
    Real uniform() { return Real(next_u64() >> 11) * 0x1.0p-53; }

    Real uniform(Real a, Real b) { return a + (b - a) * uniform(); }

    /// Uniform integer in [lo, hi] inclusive, rejection-free multiply-shift.
    int64_t uniform_int(int64_t lo, int64_t hi) {
        uint64_t span = uint64_t(hi - lo) + 1;
        // 128-bit multiply-high avoids modulo bias beyond 2^-64.
        unsigned __int128 m = (unsigned __int128)next_u64() * span;
        return lo + int64_t(m >> 64);
    }

    /// Standard normal via Box-Muller (deterministic, no state caching).
    Real normal() {
        Real u1 = 0;
        do {
            u1 = uniform();
        } while (u1 <= 0);
        Real u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    static uint64_t fnv1a64(std::string_view s) {
        uint64_t h = 0xcbf29ce484222325ull;
        for (char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        return h;
    }

  private:
    Rng(uint64_t raw, int) : state_(mix(raw)) {}

    static uint64_t mix(uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    uint64_t state_;
};

} // namespace flab
