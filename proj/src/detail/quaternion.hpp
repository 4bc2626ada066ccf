#pragma once
// Minimal quaternion arithmetic for building the instanton presets.

#include "levylap/algebra.hpp"

namespace levylap::detail {

struct Quat {
  double w = 0, x = 0, y = 0, z = 0;

  static Quat unit(int mu) {
    Quat q;
    (mu == 0 ? q.w : mu == 1 ? q.x : mu == 2 ? q.y : q.z) = 1.0;
    return q;
  }
  Quat conj() const { return {w, -x, -y, -z}; }
};

inline Quat operator*(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

// Left multiplication by the imaginary part.
inline Mat4 left_imag(const Quat& q) { return algebra::left_matrix(q.x, q.y, q.z); }

}  // namespace levylap::detail
