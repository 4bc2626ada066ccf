#pragma once
// Seeded generator whose draws do not depend on the standard library's
// distribution implementations, so seeded outputs match across platforms.

#include <cmath>
#include <cstdint>
#include <random>

#include "levylap/mat4.hpp"

namespace levylap {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    // Box-Muller; the second variate is discarded to keep the stream simple.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Vec4 unit_vec4() {
    Vec4 v{normal(), normal(), normal(), normal()};
    const double n = norm(v);
    return (1.0 / n) * v;
  }
  Vec3 unit_vec3() {
    Vec3 v{normal(), normal(), normal()};
    const double n = norm3(v);
    return {v[0] / n, v[1] / n, v[2] / n};
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace levylap
