#pragma once
// Curves in a chart and parallel transport along them: the gauge transport
// dU/dt = -A(gamma') U, the Levi-Civita transport of frames and bivectors, and the
// reparameterized curves gamma_r.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "levylap/connection.hpp"
#include "levylap/geometry.hpp"
#include "levylap/quadrature.hpp"

namespace levylap::transport {

using connection::Connection;
using geometry::MetricChart;
using levylap::operator*;
using levylap::operator+;
using levylap::operator-;

struct CurvePoint {
  Point4 x{};
  Vec4 v{};
};

// Chart-coordinate vector field along a curve with its t-derivative.
struct VectorField {
  std::function<Vec4(double)> value;
  std::function<Vec4(double)> derivative;
};

class Curve {
 public:
  // C^1 cubic Hermite interpolant through (t_k, x_k), t_0 = 0 < ... < t_K = 1. Node
  // derivatives default to three-point finite differences (periodic for closed
  // node lists).
  static Curve hermite(std::vector<double> t, std::vector<Point4> x, std::vector<Vec4> dx = {});
  // Loop starting at center + radius e_i, turning once in the (i, j) plane.
  static Curve circle(const Point4& center, double radius, int i = 0, int j = 1);
  // Gerono lemniscate through `base`: base + size (sin 2 pi t e_i + sin 4 pi t / 2 e_j).
  static Curve figure_eight(const Point4& base, double size, int i = 0, int j = 1);
  // base + sum_{k=1..modes} a_k (cos 2 pi k t - 1) + b_k sin 2 pi k t with seeded
  // normal coefficients of size scale / k.
  static Curve fourier_loop(std::uint64_t seed, const Point4& base, double scale, int modes = 3);
  static Curve segment(const Point4& a, const Point4& b);
  static Curve from_function(std::function<CurvePoint(double)> f, std::vector<double> breakpoints,
                             std::string name);
  // As above, with f(t, side) resolving one-sided limits at breakpoints.
  static Curve from_sided_function(std::function<CurvePoint(double, int)> f,
                                   std::vector<double> breakpoints, std::string name);

  CurvePoint point(double t) const { return point(t, 0); }
  // side = -1 / +1 selects the left / right limit of the velocity at a breakpoint.
  CurvePoint point(double t, int side) const;
  Point4 position(double t) const { return point(t).x; }
  Vec4 velocity(double t) const { return point(t).v; }
  Point4 basepoint() const { return position(0.0); }
  Point4 endpoint() const { return position(1.0); }
  bool is_loop(double tolerance = 1e-10) const;
  // Points in (0, 1) where the velocity may jump.
  const std::vector<double>& breakpoints() const;
  const std::string& name() const;

  // int_0^1 g(gamma', gamma') dt by Simpson.
  double energy(const MetricChart& chart, int intervals = 1000) const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

// gamma_r(t) = gamma(t / r) for t <= r, gamma(1) afterwards; breakpoint at r.
Curve reparameterize_r(const Curve& gamma, double r);
// gamma(1 - t)
Curve reversed(const Curve& gamma);
// gamma followed by eta at double speed; eta must start at gamma(1).
Curve concatenate(const Curve& gamma, const Curve& eta);
// gamma + eps h
Curve perturbed(const Curve& gamma, const VectorField& h, double eps, std::vector<double> extra_breaks = {});

struct TransportOptions {
  int steps = 2000;
  int min_segment_steps = 16;
  std::vector<double> extra_breakpoints;
};

struct TransportResult {
  TimeGrid grid;
  std::vector<Point4> x;
  std::vector<Vec4> v;
  std::vector<Mat4> u;  // U_{t_k,0}; empty without a connection
  std::vector<Mat4> e;  // columns e_mu(gamma, t_k); empty without a chart
  geometry::Orientation orientation = geometry::Orientation::Right;
  std::vector<Mat4> g;  // metric at x_k when frames were transported

  std::size_t size() const { return grid.size(); }
  // U_{t_j, t_k} = U_{t_j,0} U_{t_k,0}^{-1}
  Mat4 u_between(std::size_t j, std::size_t k) const { return u[j] * u[k].transposed(); }
  Mat4 u_end() const { return u.back(); }
  // Q_{t_k,0} as a matrix acting on chart vectors: e(t_k) e(0)^{-1}.
  Mat4 levi_civita(std::size_t k) const;
  geometry::SelfDualBasis bivectors(std::size_t k) const;
};

TransportResult gauge_transport(const Connection& a, const Curve& gamma, const TransportOptions& opt = {});
TransportResult levi_civita_transport(const MetricChart& chart, const Curve& gamma,
                                      const TransportOptions& opt = {});
// Both transports on one grid.
TransportResult transport(const Connection& a, const MetricChart& chart, const Curve& gamma,
                          const TransportOptions& opt = {});

// v_i^+-(gamma, t_k) for every grid node.
std::vector<geometry::SelfDualBasis> transport_bivectors(const MetricChart& chart, const Curve& gamma,
                                                         const TransportOptions& opt = {});

// Nearest S^3_L element (quaternion normalization).
Mat4 project_to_group(const Mat4& u);

// d/de U_{1,0}(gamma + e h_hat) at e = 0 with h_hat(t) = h^mu(t) e_mu(gamma, t) and
// h(0) = 0: -A(gamma(1)) h_hat(1) U_{1,0} - int U_{1,t} F(h_hat, gamma') U_{t,0} dt.
Mat4 first_variation(const Connection& a, const MetricChart& chart, const Curve& gamma,
                     const std::function<Vec4(double)>& h, const TransportOptions& opt = {});

}  // namespace levylap::transport
