#include "levylap/algebra.hpp"

#include <cmath>
#include <string>

#include "levylap/errors.hpp"

namespace levylap::algebra {

const char* to_string(Side s) {
  switch (s) {
    case Side::Left:
      return "Left";
    case Side::Right:
      return "Right";
    case Side::General:
      return "General";
  }
  return "?";
}

Mat4 left_matrix(double b, double c, double d) {
  Mat4 m;
  m(0, 1) = -b, m(0, 2) = -c, m(0, 3) = -d;
  m(1, 0) = b, m(1, 2) = -d, m(1, 3) = c;
  m(2, 0) = c, m(2, 1) = d, m(2, 3) = -b;
  m(3, 0) = d, m(3, 1) = -c, m(3, 2) = b;
  return m;
}

Mat4 right_matrix(double b, double c, double d) {
  Mat4 m;
  m(0, 1) = -b, m(0, 2) = -c, m(0, 3) = -d;
  m(1, 0) = b, m(1, 2) = d, m(1, 3) = -c;
  m(2, 0) = c, m(2, 1) = -d, m(2, 3) = b;
  m(3, 0) = d, m(3, 1) = c, m(3, 2) = -b;
  return m;
}

Mat4 left_basis(int i) {
  Vec3 c{};
  c.at(i) = 1.0;
  return left_matrix(c[0], c[1], c[2]);
}

Mat4 right_basis(int i) {
  Vec3 c{};
  c.at(i) = 1.0;
  return right_matrix(c[0], c[1], c[2]);
}

Mat4 left_group(const Vec4& q) {
  return q[0] * Mat4::identity() + left_matrix(q[1], q[2], q[3]);
}

Mat4 right_group(const Vec4& q) {
  return q[0] * Mat4::identity() + right_matrix(q[1], q[2], q[3]);
}

double trace_product(const Mat4& x, const Mat4& y) {
  // -tr(XY) = -sum_ij x_ij y_ji
  return -frobenius_dot(x, y.transposed());
}

void require_antisymmetric(const Mat4& x, const char* where, double tolerance) {
  const double scale = std::fmax(1.0, max_abs(x));
  if (antisymmetry_defect(x) > tolerance * scale) {
    throw ContractViolation(std::string(where) + ": matrix is not antisymmetric");
  }
}

namespace {

Vec3 left_coeffs(const Mat4& x) {
  Vec3 c;
  for (int i = 0; i < 3; ++i) c[i] = 0.25 * trace_product(x, left_basis(i));
  return c;
}

Vec3 right_coeffs(const Mat4& x) {
  Vec3 c;
  for (int i = 0; i < 3; ++i) c[i] = 0.25 * trace_product(x, right_basis(i));
  return c;
}

Mat4 exp_quaternionic(const Mat4& x, double n) {
  if (n == 0.0) return Mat4::identity();
  // x^2 = -n^2 I on either simple factor
  return std::cos(n) * Mat4::identity() + (std::sin(n) / n) * x;
}

}  // namespace

Mat4 project_left(const Mat4& x) {
  require_antisymmetric(x, "project_left");
  const Vec3 c = left_coeffs(x);
  return left_matrix(c[0], c[1], c[2]);
}

Mat4 project_right(const Mat4& x) {
  require_antisymmetric(x, "project_right");
  const Vec3 c = right_coeffs(x);
  return right_matrix(c[0], c[1], c[2]);
}

Omega omega_coefficients(const Mat4& x) {
  require_antisymmetric(x, "omega_coefficients");
  return {left_coeffs(x), right_coeffs(x)};
}

Mat4 from_omega(const Omega& w) {
  return left_matrix(w.plus[0], w.plus[1], w.plus[2]) +
         right_matrix(w.minus[0], w.minus[1], w.minus[2]);
}

geometry::Bivector bivector_of(const Mat4& x) {
  require_antisymmetric(x, "bivector_of");
  return {x * (-1.0 / std::sqrt(2.0))};
}

Mat4 so4_of(const geometry::Bivector& b) {
  require_antisymmetric(b.c, "so4_of");
  return b.c * (-std::sqrt(2.0));
}

Mat4 exp_so4(const Mat4& x) {
  require_antisymmetric(x, "exp_so4", 1e-10);
  const Vec3 l = left_coeffs(x);
  const Vec3 r = right_coeffs(x);
  const Mat4 el = exp_quaternionic(left_matrix(l[0], l[1], l[2]), norm3(l));
  const Mat4 er = exp_quaternionic(right_matrix(r[0], r[1], r[2]), norm3(r));
  return el * er;
}

Mat4 polar_project(const Mat4& x) {
  // One Newton-Schulz step: X (3I - X^T X) / 2.
  const Mat4 xtx = x.transposed() * x;
  return x * (1.5 * Mat4::identity() - 0.5 * xtx);
}

}  // namespace levylap::algebra
