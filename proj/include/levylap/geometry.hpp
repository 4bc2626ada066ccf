#pragma once
// Chart-based Riemannian 4-geometry: metric presets, Christoffel symbols, the Hodge
// star on 2-forms and bivectors, self-dual bivector bases and volume density.
//
// Compact manifolds are single charts: the round S^4 through stereographic
// projection (sphere radius 1 unless given), S^1 x S^3 as angle x stereographic S^3.

#include <array>
#include <string>

#include "levylap/mat4.hpp"

namespace levylap::geometry {

enum class Orientation { Right, Left };

// Smooth scalar fields with closed-form gradient and Hessian. Used both as conformal
// factors phi (metric e^{2 phi} delta) and as test functions for the Laplace-Beltrami
// functional.
class ScalarField {
 public:
  enum class Family { Constant, Linear, Quadratic, Product, Gaussian, Stereographic };

  static ScalarField constant(double c);
  static ScalarField linear(const Vec4& direction);
  // amplitude * |x - center|^2
  static ScalarField quadratic(double amplitude, const Point4& center = {});
  // amplitude * x_i * x_j, i != j
  static ScalarField product(int i, int j, double amplitude = 1.0);
  // amplitude * exp(-|x - center|^2 / (2 width^2))
  static ScalarField gaussian(double amplitude, const Point4& center, double width);
  // log(2 radius) - log(1 + |x|^2): the conformal factor of the stereographic sphere.
  static ScalarField stereographic(double radius);

  Family family() const { return family_; }
  double value(const Point4& x) const;
  Vec4 gradient(const Point4& x) const;
  Mat4 hessian(const Point4& x) const;
  std::string describe() const;

 private:
  Family family_ = Family::Constant;
  double amplitude_ = 0.0;
  Point4 center_{};
  Vec4 direction_{};
  double width_ = 1.0;
  int i_ = 0;
  int j_ = 1;
};

class MetricChart {
 public:
  enum class Preset { Flat, ConformallyFlat, RoundS4, S1xS3 };

  static MetricChart flat();
  static MetricChart conformally_flat(ScalarField phi);
  static MetricChart round_s4(double radius = 1.0);
  // Coordinates (theta, y1, y2, y3); theta must lie in [-pi, pi].
  static MetricChart s1xs3(double radius = 1.0);

  MetricChart with_orientation(Orientation o) const;

  Preset preset() const { return preset_; }
  Orientation orientation() const { return orientation_; }
  double orientation_sign() const { return orientation_ == Orientation::Right ? 1.0 : -1.0; }
  double radius() const { return radius_; }
  // Conformal factor for Flat / ConformallyFlat / RoundS4.
  const ScalarField& conformal_factor() const { return phi_; }
  bool is_conformally_flat() const { return preset_ != Preset::S1xS3; }
  std::string name() const;

  // Throws DomainError for non-finite points and unnormalized S^1 angles.
  void check_domain(const Point4& x) const;
  // Maps the S^1 angle into [-pi, pi); identity for other presets.
  Point4 wrap(const Point4& x) const;

  Mat4 metric(const Point4& x) const;
  // d[s](m, n) = partial_s g_mn
  std::array<Mat4, 4> metric_derivatives(const Point4& x) const;

 private:
  Preset preset_ = Preset::Flat;
  Orientation orientation_ = Orientation::Right;
  ScalarField phi_ = ScalarField::constant(0.0);
  double radius_ = 1.0;
};

// gamma[k](l, n) = Gamma^k_{ln}
using Christoffel = std::array<Mat4, 4>;

// Covariant components F_mn of a real 2-form.
struct TwoForm {
  Mat4 c;
};
// Contravariant components B^mn of a bivector.
struct Bivector {
  Mat4 c;
};

Mat4 metric_eval(const MetricChart& chart, const Point4& x);
Christoffel christoffel(const MetricChart& chart, const Point4& x);
// Fourth-order central differences of the metric, then the Levi-Civita formula.
Christoffel christoffel_numeric(const MetricChart& chart, const Point4& x, double h = 1e-4);
// Levi-Civita formula from g and its first derivatives.
Christoffel christoffel_from_metric(const Mat4& g, const std::array<Mat4, 4>& dg);
double volume_density(const MetricChart& chart, const Point4& x);

TwoForm hodge_star(const MetricChart& chart, const Point4& x, const TwoForm& w);
Bivector hodge_star(const MetricChart& chart, const Point4& x, const Bivector& b);
// Star in an orthonormal frame, where it only depends on the orientation.
Mat4 hodge_star_orthonormal(const Mat4& w, double orientation_sign = 1.0);

TwoForm lower(const Mat4& g, const Bivector& b);
Bivector raise(const Mat4& g_inverse, const TwoForm& w);

// F<B> = (1/2) F_ab B^ab, so F<e_a ^ e_b> = F(e_a, e_b).
double pairing(const TwoForm& f, const Bivector& b);
// (1/2) g_ac g_bd A^ab B^cd
double inner(const Mat4& g, const Bivector& a, const Bivector& b);

// a ^ b as contravariant components a^m b^n - a^n b^m.
Bivector wedge(const Vec4& a, const Vec4& b);

struct SelfDualBasis {
  std::array<Bivector, 3> plus;
  std::array<Bivector, 3> minus;
};

// Columns of `frame` are e_1..e_4. The frame must be orthonormal for `metric` and
// positively oriented for `orientation`; otherwise ContractViolation.
SelfDualBasis selfdual_basis(const Mat4& frame, const Mat4& metric = Mat4::identity(),
                             Orientation orientation = Orientation::Right,
                             double tolerance = 1e-8);

// Positively oriented g-orthonormal frame g^{-1/2} (last column negated for Left charts).
Mat4 orthonormal_frame(const MetricChart& chart, const Point4& x);

// Delta f = g^mn (partial_m partial_n f - Gamma^k_mn partial_k f)
double laplace_beltrami(const MetricChart& chart, const Point4& x, const ScalarField& f);

int levi_civita_symbol(int a, int b, int c, int d);

}  // namespace levylap::geometry
