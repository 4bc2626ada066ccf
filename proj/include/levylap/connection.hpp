#pragma once
// Gauge connections with structure group S^3_L in SO(4): presets, 2-jets, curvature,
// self-dual split, covariant derivatives, Yang-Mills action and topological charge.

#include <array>
#include <functional>
#include <memory>
#include <string>

#include "levylap/geometry.hpp"
#include "levylap/mat4.hpp"

namespace levylap::connection {

using geometry::MetricChart;
// Vec4 is a std::array, so its operators are not found by ADL once this namespace
// declares its own.
using levylap::operator*;
using levylap::operator+;
using levylap::operator-;

// A matrix-valued function with first and second partial derivatives at a point.
struct MatJet {
  Mat4 v;
  std::array<Mat4, 4> d{};                   // d[l] = partial_l
  std::array<std::array<Mat4, 4>, 4> dd{};  // dd[k][l] = partial_k partial_l
};
MatJet operator+(const MatJet& a, const MatJet& b);
MatJet operator*(const MatJet& a, const MatJet& b);
MatJet transpose(const MatJet& a);

// jet[m] is the jet of A_m.
using ConnectionJet = std::array<MatJet, 4>;
// f[m][n] is a Lie(S^3_L) matrix.
using FormMat = std::array<std::array<Mat4, 4>, 4>;

// A G-valued field psi with derivatives through third order.
struct GaugeJet {
  Mat4 v;
  std::array<Mat4, 4> d{};
  std::array<std::array<Mat4, 4>, 4> dd{};
  std::array<std::array<std::array<Mat4, 4>, 4>, 4> ddd{};
};

// Phase function for axial gauge fields: a sin(k.x + theta) + c |x - center|^2.
struct Phase {
  double amplitude = 0.0;
  Vec4 wave{};
  double offset = 0.0;
  double quadratic = 0.0;
  Point4 center{};
};

class GaugeField {
 public:
  static GaugeField identity();
  // psi(x) = exp(phase(x) U) with U = left_matrix(axis), axis a unit 3-vector.
  static GaugeField axial(const Vec3& axis, Phase phase);
  // psi = psi1 psi2
  static GaugeField product(GaugeField a, GaugeField b);
  // Arbitrary G-valued field; jets by central differences with step h.
  static GaugeField from_function(std::function<Mat4(const Point4&)> f, std::string name,
                                  double h = 1e-3);

  Mat4 value(const Point4& x) const;
  GaugeJet jet(const Point4& x) const;
  const std::string& name() const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

enum class Duality { AntiSelfDual, SelfDual };
const char* to_string(Duality d);

// Compactly supported perturbation amplitude * b(x) * p_m(x) * direction with
// b(x) = exp(1 - 1 / (1 - |x - center|^2 / radius^2)) inside the ball, 0 outside, and
// p_m(x) = polarization_m + 1/2 field_nm (x - center)^n. An antisymmetric `field`
// gives a patch of nearly constant field strength amplitude * field around the center.
struct Bump {
  Point4 center{};
  double radius = 1.0;
  Vec4 polarization{1.0, 0.0, 0.0, 0.0};
  Mat4 field{};
  Vec3 direction{1.0, 0.0, 0.0};
  double amplitude = 0.1;
};

class Connection {
 public:
  static Connection zero();
  // A_m = left_imag(conj(q) E_m) / (rho (1 + |q|^2)), q = (x - center) / rho, for the
  // anti-self-dual sign; left_imag(q conj(E_m)) for the self-dual one.
  static Connection instanton(double rho = 1.0, const Point4& center = {},
                              Duality duality = Duality::AntiSelfDual);
  static Connection constant(const std::array<Mat4, 4>& a);
  static Connection perturbed(Connection base, Bump bump);
  static Connection gauge_transformed(Connection base, GaugeField psi);
  // Replaces analytic jets by fourth-order central differences of the potential
  // (step h for first derivatives, sqrt(h) scale for second).
  static Connection numeric(Connection base, double h = 1e-4);

  std::array<Mat4, 4> potential(const Point4& x) const;
  ConnectionJet jet(const Point4& x) const;
  std::string name() const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

// 4th-order central-difference jet of any connection's potential.
ConnectionJet numeric_jet(const Connection& a, const Point4& x, double h1 = 1e-4, double h2 = 1e-3);

Connection gauge_transform(const Connection& a, const GaugeField& psi);

struct CurvatureSample {
  Point4 x{};
  FormMat f{};
  FormMat plus{};
  FormMat minus{};
};

// F and its first derivatives df[l][m][n] = partial_l F_mn.
struct CurvatureJet {
  std::array<Mat4, 4> a{};
  FormMat f{};
  std::array<FormMat, 4> df{};
};

FormMat curvature_form(const ConnectionJet& j);
CurvatureJet curvature_jet(const ConnectionJet& j);
CurvatureSample curvature(const Connection& a, const MetricChart& chart, const Point4& x);

// Hodge star applied entrywise to a Lie-algebra-valued 2-form.
FormMat hodge_star(const MetricChart& chart, const Point4& x, const FormMat& f);
// Same in an orthonormal frame, where only the orientation matters.
FormMat hodge_star_orthonormal(const FormMat& f, double orientation_sign = 1.0);

// (B1, B2) = -1/2 tr(B1 B2): the trace form of the defining SU(2) representation.
double lie_inner(const Mat4& a, const Mat4& b);
// |F|^2 = 1/2 g^ma g^nb (F_mn, F_ab)
double form_norm2(const Mat4& g_inverse, const FormMat& f);
double form_inner(const Mat4& g_inverse, const FormMat& a, const FormMat& b);

// nabla[l][m][n] = nabla_l F_mn including the connection and Christoffel terms.
std::array<FormMat, 4> covariant_derivative(const CurvatureJet& cj, const geometry::Christoffel& gamma);
// (D_A^* F)_n = -g^{ml} nabla_l F_mn
std::array<Mat4, 4> codifferential(const Connection& a, const MetricChart& chart, const Point4& x);
std::array<Mat4, 4> codifferential(const CurvatureJet& cj, const Mat4& g_inverse,
                                   const geometry::Christoffel& gamma);
// max over (l, m, n) of the cyclic sum D_l F_mn + D_m F_nl + D_n F_lm.
double bianchi_defect(const Connection& a, const Point4& x);

struct Region {
  enum class Kind { Ball, Box };
  Kind kind = Kind::Ball;
  Point4 center{};
  double radius = 50.0;
  int radial = 1600;  // Simpson intervals in r
  int angular = 8;    // Simpson intervals per hyperspherical angle (phi gets 2x)
  Point4 lo{-1, -1, -1, -1};
  Point4 hi{1, 1, 1, 1};
  int box_intervals = 16;

  static Region ball(const Point4& center, double radius, int radial = 1600, int angular = 8);
  static Region box(const Point4& lo, const Point4& hi, int intervals);
};

struct IntegralResult {
  double value = 0.0;
  double tail_bound = 0.0;  // analytic bound on the integral outside a ball region
  std::size_t samples = 0;
};

IntegralResult ym_action(const Connection& a, const MetricChart& chart, const Region& region,
                         int jobs = 1);
IntegralResult topological_charge(const Connection& a, const MetricChart& chart,
                                  const Region& region, int jobs = 1);

struct ActionCharge {
  IntegralResult action;
  IntegralResult charge;
};
// Both integrals from one pass over the quadrature nodes.
ActionCharge action_and_charge(const Connection& a, const MetricChart& chart, const Region& region,
                               int jobs = 1);

}  // namespace levylap::connection
