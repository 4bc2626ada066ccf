#pragma once
// Fixed-size 4-vectors and row-major 4x4 matrices. Products and weighted sums go
// through the dispatched SIMD kernels.

#include <array>
#include <cmath>
#include <span>

#include "levylap/simd.hpp"

namespace levylap {

using Vec4 = std::array<double, 4>;
using Point4 = Vec4;
using Vec3 = std::array<double, 3>;

struct Mat4 {
  alignas(32) std::array<double, 16> v{};

  static Mat4 zero() { return {}; }
  static Mat4 identity() {
    Mat4 m;
    m.v[0] = m.v[5] = m.v[10] = m.v[15] = 1.0;
    return m;
  }
  static Mat4 diagonal(const Vec4& d) {
    Mat4 m;
    for (int i = 0; i < 4; ++i) m.v[5 * i] = d[i];
    return m;
  }
  // a e_i (x) e_j - a e_j (x) e_i
  static Mat4 wedge(int i, int j, double a = 1.0) {
    Mat4 m;
    m(i, j) += a;
    m(j, i) -= a;
    return m;
  }
  static Mat4 outer(const Vec4& a, const Vec4& b) {
    Mat4 m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = a[i] * b[j];
    return m;
  }
  // Columns are the given vectors.
  static Mat4 from_columns(const std::array<Vec4, 4>& cols) {
    Mat4 m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = cols[j][i];
    return m;
  }

  double& operator()(int r, int c) { return v[4 * r + c]; }
  double operator()(int r, int c) const { return v[4 * r + c]; }

  Vec4 column(int c) const { return {v[c], v[4 + c], v[8 + c], v[12 + c]}; }

  Mat4& operator+=(const Mat4& o) {
    for (int i = 0; i < 16; ++i) v[i] += o.v[i];
    return *this;
  }
  Mat4& operator-=(const Mat4& o) {
    for (int i = 0; i < 16; ++i) v[i] -= o.v[i];
    return *this;
  }
  Mat4& operator*=(double s) {
    for (double& x : v) x *= s;
    return *this;
  }

  Mat4 transposed() const {
    Mat4 t;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) t(i, j) = (*this)(j, i);
    return t;
  }
  double trace() const { return v[0] + v[5] + v[10] + v[15]; }

  friend bool operator==(const Mat4&, const Mat4&) = default;
};

inline Mat4 operator+(Mat4 a, const Mat4& b) { return a += b; }
inline Mat4 operator-(Mat4 a, const Mat4& b) { return a -= b; }
inline Mat4 operator-(Mat4 a) { return a *= -1.0; }
inline Mat4 operator*(double s, Mat4 a) { return a *= s; }
inline Mat4 operator*(Mat4 a, double s) { return a *= s; }

inline Mat4 operator*(const Mat4& a, const Mat4& b) {
  Mat4 c;
  simd::active().mat4_mul(a.v.data(), b.v.data(), c.v.data());
  return c;
}

inline Vec4 operator*(const Mat4& a, const Vec4& x) {
  Vec4 y{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) y[i] += a(i, j) * x[j];
  return y;
}

inline Mat4 commutator(const Mat4& a, const Mat4& b) { return a * b - b * a; }

// Frobenius inner product sum_ij a_ij b_ij.
inline double frobenius_dot(const Mat4& a, const Mat4& b) {
  return simd::active().dot(a.v.data(), b.v.data(), 16);
}
inline double frobenius_norm(const Mat4& a) { return std::sqrt(frobenius_dot(a, a)); }

inline double max_abs(const Mat4& a) {
  double m = 0.0;
  for (double x : a.v) m = std::fmax(m, std::fabs(x));
  return m;
}

inline double antisymmetry_defect(const Mat4& a) { return max_abs(a + a.transposed()); }
inline double symmetry_defect(const Mat4& a) { return max_abs(a - a.transposed()); }
inline double orthogonality_defect(const Mat4& a) {
  return max_abs(a.transposed() * a - Mat4::identity());
}

double determinant(const Mat4& a);
Mat4 inverse(const Mat4& a);

// sum_i w_i m_i, accumulated in index order.
Mat4 weighted_sum(std::span<const Mat4> values, std::span<const double> weights);

inline double dot(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}
inline double norm(const Vec4& a) { return std::sqrt(dot(a, a)); }
inline Vec4 operator+(Vec4 a, const Vec4& b) {
  for (int i = 0; i < 4; ++i) a[i] += b[i];
  return a;
}
inline Vec4 operator-(Vec4 a, const Vec4& b) {
  for (int i = 0; i < 4; ++i) a[i] -= b[i];
  return a;
}
inline Vec4 operator*(double s, Vec4 a) {
  for (double& x : a) x *= s;
  return a;
}

inline double norm3(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

}  // namespace levylap
