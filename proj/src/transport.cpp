#include "levylap/transport.hpp"

#include <cmath>
#include <string>

#include "levylap/algebra.hpp"
#include "levylap/errors.hpp"

namespace levylap::transport {

Mat4 project_to_group(const Mat4& u) {
  Vec4 q;
  q[0] = 0.25 * u.trace();
  for (int i = 0; i < 3; ++i) q[i + 1] = 0.25 * frobenius_dot(u, algebra::left_basis(i));
  const double n = norm(q);
  if (!(n > 0.0) || !std::isfinite(n)) throw NumericError("transport: group projection failed");
  return algebra::left_group((1.0 / n) * q);
}

namespace {

// Newton step towards E (E^T g E)^{-1/2}.
Mat4 reorthonormalize(const Mat4& e, const Mat4& g) {
  const Mat4 s = e.transposed() * g * e;
  return e * (1.5 * Mat4::identity() - 0.5 * s);
}

Mat4 gauge_generator(const Connection& a, const CurvePoint& p) {
  const auto pot = a.potential(p.x);
  Mat4 m;
  for (int mu = 0; mu < 4; ++mu) m += p.v[mu] * pot[mu];
  return m;
}

// M^k_n = Gamma^k_{ln} v^l
Mat4 frame_generator(const MetricChart& chart, const CurvePoint& p) {
  const geometry::Christoffel gam = geometry::christoffel(chart, p.x);
  Mat4 m;
  for (int k = 0; k < 4; ++k)
    for (int n = 0; n < 4; ++n) {
      double s = 0.0;
      for (int l = 0; l < 4; ++l) s += gam[k](l, n) * p.v[l];
      m(k, n) = s;
    }
  return m;
}

void check_finite(const Mat4& m, double t, const char* what) {
  for (double v : m.v) {
    if (!std::isfinite(v)) {
      throw NumericError(std::string(what) + ": non-finite state at t = " + std::to_string(t));
    }
  }
}

TransportResult run(const Connection* a, const MetricChart* chart, const Curve& gamma,
                    const TransportOptions& opt) {
  std::vector<double> breaks = gamma.breakpoints();
  breaks.insert(breaks.end(), opt.extra_breakpoints.begin(), opt.extra_breakpoints.end());
  TransportResult r;
  r.grid = TimeGrid::with_breakpoints(breaks, opt.steps, opt.min_segment_steps);
  const std::size_t n = r.grid.size();
  r.x.resize(n);
  r.v.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const CurvePoint p = gamma.point(r.grid.t(k), r.grid.side(k));
    if (chart) chart->check_domain(p.x);
    r.x[k] = p.x;
    r.v[k] = p.v;
  }
  if (a) r.u.resize(n);
  if (chart) {
    r.e.resize(n);
    r.g.resize(n);
    r.orientation = chart->orientation();
  }

  Mat4 u = Mat4::identity();
  Mat4 e = chart ? geometry::orthonormal_frame(*chart, r.x[0]) : Mat4::identity();
  const auto& bounds = r.grid.segment_bounds();
  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    const std::size_t first = bounds[s], last = bounds[s + 1] - 1;
    if (a) r.u[first] = u;
    if (chart) {
      r.e[first] = e;
      r.g[first] = chart->metric(r.x[first]);
    }
    for (std::size_t k = first; k < last; ++k) {
      const double t0 = r.grid.t(k), t1 = r.grid.t(k + 1), h = t1 - t0;
      const CurvePoint p0{r.x[k], r.v[k]};
      const CurvePoint pm = gamma.point(0.5 * (t0 + t1), 0);
      const CurvePoint p1{r.x[k + 1], r.v[k + 1]};
      if (a) {
        const Mat4 m0 = gauge_generator(*a, p0), mm = gauge_generator(*a, pm), m1 = gauge_generator(*a, p1);
        const Mat4 k1 = -1.0 * (m0 * u);
        const Mat4 k2 = -1.0 * (mm * (u + (0.5 * h) * k1));
        const Mat4 k3 = -1.0 * (mm * (u + (0.5 * h) * k2));
        const Mat4 k4 = -1.0 * (m1 * (u + h * k3));
        u = project_to_group(u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
        check_finite(u, t1, "gauge_transport");
        r.u[k + 1] = u;
      }
      if (chart) {
        const Mat4 m0 = frame_generator(*chart, p0), mm = frame_generator(*chart, pm),
                   m1 = frame_generator(*chart, p1);
        const Mat4 k1 = -1.0 * (m0 * e);
        const Mat4 k2 = -1.0 * (mm * (e + (0.5 * h) * k1));
        const Mat4 k3 = -1.0 * (mm * (e + (0.5 * h) * k2));
        const Mat4 k4 = -1.0 * (m1 * (e + h * k3));
        const Mat4 g1 = chart->metric(p1.x);
        e = reorthonormalize(e + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), g1);
        check_finite(e, t1, "levi_civita_transport");
        r.e[k + 1] = e;
        r.g[k + 1] = g1;
      }
    }
  }
  return r;
}

}  // namespace

Mat4 TransportResult::levi_civita(std::size_t k) const { return e[k] * inverse(e[0]); }

geometry::SelfDualBasis TransportResult::bivectors(std::size_t k) const {
  return geometry::selfdual_basis(e[k], g[k], orientation, 1e-8);
}

TransportResult gauge_transport(const Connection& a, const Curve& gamma, const TransportOptions& opt) {
  return run(&a, nullptr, gamma, opt);
}

TransportResult levi_civita_transport(const MetricChart& chart, const Curve& gamma, const TransportOptions& opt) {
  return run(nullptr, &chart, gamma, opt);
}

TransportResult transport(const Connection& a, const MetricChart& chart, const Curve& gamma,
                          const TransportOptions& opt) {
  return run(&a, &chart, gamma, opt);
}

std::vector<geometry::SelfDualBasis> transport_bivectors(const MetricChart& chart, const Curve& gamma,
                                                         const TransportOptions& opt) {
  const TransportResult r = levi_civita_transport(chart, gamma, opt);
  std::vector<geometry::SelfDualBasis> out(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) out[k] = r.bivectors(k);
  return out;
}

Mat4 first_variation(const Connection& a, const MetricChart& chart, const Curve& gamma,
                     const std::function<Vec4(double)>& h, const TransportOptions& opt) {
  const TransportResult r = transport(a, chart, gamma, opt);
  if (norm(h(0.0)) > 1e-12) throw ContractViolation("first_variation: direction must vanish at t = 0");
  const std::size_t n = r.size();
  const Mat4 uend = r.u_end();
  std::vector<Mat4> vals(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec4 hh = r.e[k] * h(r.grid.t(k));
    const connection::FormMat f = connection::curvature_form(a.jet(r.x[k]));
    Mat4 fhv;
    for (int m = 0; m < 4; ++m)
      for (int nn = 0; nn < 4; ++nn) {
        const double c = hh[m] * r.v[k][nn];
        if (c != 0.0) fhv += c * f[m][nn];
      }
    vals[k] = uend * r.u[k].transposed() * fhv * r.u[k];
  }
  Mat4 out = -1.0 * r.grid.integrate(vals);
  const Vec4 h1 = r.e[n - 1] * h(1.0);
  const auto pot = a.potential(r.x[n - 1]);
  Mat4 a1;
  for (int m = 0; m < 4; ++m) a1 += h1[m] * pot[m];
  out -= a1 * uend;
  return out;
}

}  // namespace levylap::transport
