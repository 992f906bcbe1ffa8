#pragma once

// Seeded randomness with a platform-independent output sequence. The engine
// is std::mt19937_64 (its stream is fully specified by the standard); all
// conversions to bounded ints, doubles and normals are done here rather than
// through std:: distributions, whose outputs vary across implementations.

#include <cmath>
#include <cstdint>
#include <random>

namespace mutsamp {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform integer in [0, n), n >= 1. Rejection sampling keeps the draw
    // unbiased and the sequence identical everywhere.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    // Uniform double in [0, 1) with 53 bits of precision.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; consumes exactly two draws.
    double next_normal() {
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; // (0,1]
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace mutsamp
