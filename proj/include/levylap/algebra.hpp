#pragma once
// so(4) = Lie(S^3_L) + Lie(S^3_R): bases, projections, (b, c, d) coefficients,
// the identification with bivectors, exp, and rotation curves W: [0,1] -> SO(4).

#include <memory>
#include <vector>

#include "levylap/geometry.hpp"
#include "levylap/mat4.hpp"

namespace levylap::algebra {

enum class Side { Left, Right, General };
const char* to_string(Side s);

// Lie(S^3_L) matrix with coefficients (b, c, d); left_basis(i) has unit coefficient i.
Mat4 left_matrix(double b, double c, double d);
Mat4 right_matrix(double b, double c, double d);
Mat4 left_basis(int i);
Mat4 right_basis(int i);
// Group elements a I + b e1 + c e2 + d e3 (left) and the right analogue.
Mat4 left_group(const Vec4& q);
Mat4 right_group(const Vec4& q);

// <X, Y> = -tr(XY)
double trace_product(const Mat4& x, const Mat4& y);

// Throws ContractViolation if X is not antisymmetric (relative tolerance).
void require_antisymmetric(const Mat4& x, const char* where, double tolerance = 1e-12);

Mat4 project_left(const Mat4& x);
Mat4 project_right(const Mat4& x);

struct Omega {
  Vec3 plus{};
  Vec3 minus{};
};
Omega omega_coefficients(const Mat4& x);
Mat4 from_omega(const Omega& w);

// Lie(S^3_L) -> Lambda^2_+, Lie(S^3_R) -> Lambda^2_-, extended linearly:
// bivector_of(X) = -X / sqrt(2) as contravariant components in the reference frame.
// For any 2-form F: tr(X F) = 2 sqrt(2) F<bivector_of(X)>.
geometry::Bivector bivector_of(const Mat4& x);
Mat4 so4_of(const geometry::Bivector& b);
inline constexpr double kBivectorTraceConstant = 2.8284271247461903;  // 2 sqrt(2)

Mat4 exp_so4(const Mat4& x);
// Nearest orthogonal matrix, assuming x is already close to orthogonal.
Mat4 polar_project(const Mat4& x);

// Which log-derivative a coefficient readout uses: body W^{-1} W' or spatial W' W^{-1}.
enum class Derivative { Body, Spatial };

// W in C^1([0,1], SO(4)) with W(0) = I, given through its body log-derivative
// L_W(t) = W^{-1}(t) W'(t). Constant and product-of-exponential generators are
// evaluated in closed form; trigonometric and node-list generators are integrated
// with a fourth-order Magnus scheme on a uniform grid.
class RotationCurve {
 public:
  enum class Kind { Constant, Trigonometric, Nodes, ProductExp };

  static RotationCurve identity();
  static RotationCurve constant(const Mat4& generator);
  // L(t) = c + sum_k a_k cos(2 pi k t) + b_k sin(2 pi k t), k = 1..
  static RotationCurve trigonometric(const Mat4& c, std::vector<Mat4> cos_terms,
                                     std::vector<Mat4> sin_terms, int steps = 512);
  // Piecewise-linear generator through uniformly spaced nodes (at least two).
  static RotationCurve nodes(std::vector<Mat4> generators, int steps = 512);
  // W(t) = exp(tX) exp(tY).
  static RotationCurve product_exp(const Mat4& x, const Mat4& y);

  Kind kind() const;
  Side side() const;
  // ContractViolation unless side() == s.
  void require_side(Side s, const char* where) const;

  Mat4 W(double t) const;
  Mat4 log_derivative(double t) const;
  Mat4 right_log_derivative(double t) const;
  Mat4 derivative(double t, Derivative d) const {
    return d == Derivative::Body ? log_derivative(t) : right_log_derivative(t);
  }
  // Composite Simpson integral of the chosen log-derivative over [0, 1].
  Mat4 integrated(Derivative d = Derivative::Body, int intervals = 1024) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// alpha_i^+- = int_0^1 omega_i^+-(t) dt
Omega alpha_coefficients(const RotationCurve& w, Derivative d = Derivative::Body,
                         int intervals = 1024);

}  // namespace levylap::algebra
