#pragma once

#include <cstdint>
#include <random>

#include "randbeta/context.hpp"

namespace randbeta {

// Seeded mt19937_64. The standard pins the engine's output sequence, so every
// consumer (coins, uniforms) reproduces bit-for-bit across platforms; we avoid
// std::uniform_real_distribution for the same reason.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    Digit coin() { return static_cast<Digit>(eng_() & 1u); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    std::uint64_t raw() { return eng_(); }

  private:
    std::mt19937_64 eng_;
};

}  // namespace randbeta
