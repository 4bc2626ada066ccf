#include "oracles.hpp"

#include <cmath>
#include <vector>

namespace levylap::oracle {

using transport::Curve;
using transport::VectorField;

VectorField random_direction(Rng& rng, double size) {
  std::array<Vec4, 3> c;
  for (auto& v : c)
    for (double& x : v) x = size * rng.normal();
  VectorField f;
  f.value = [c](double t) {
    return t * c[0] + std::sin(M_PI * t) * c[1] + std::sin(2 * M_PI * t) * t * c[2];
  };
  f.derivative = [c](double t) {
    return c[0] + M_PI * std::cos(M_PI * t) * c[1] +
           (2 * M_PI * t * std::cos(2 * M_PI * t) + std::sin(2 * M_PI * t)) * c[2];
  };
  return f;
}

Mat4 fd_first_variation(const connection::Connection& a, const Curve& gamma, const VectorField& h,
                        double eps, const transport::TransportOptions& opt) {
  const Mat4 up = transport::gauge_transport(a, transport::perturbed(gamma, h, eps), opt).u_end();
  const Mat4 um = transport::gauge_transport(a, transport::perturbed(gamma, h, -eps), opt).u_end();
  return (1.0 / (2 * eps)) * (up - um);
}

namespace {

double local_s(const Window& w, double t) { return (t - w.t0) / w.delta; }
bool inside(const Window& w, double t) { return t > w.t0 && t < w.t0 + w.delta; }

// profile 0: sin^2(pi s); profile 1: sin^2(pi s) cos(pi s)
double profile(int p, double s) {
  const double sn = std::sin(M_PI * s), cs = std::cos(M_PI * s);
  return p == 0 ? sn * sn : sn * sn * cs;
}
double profile_ds(int p, double s) {
  const double sn = std::sin(M_PI * s), cs = std::cos(M_PI * s);
  return p == 0 ? 2 * M_PI * sn * cs : 2 * M_PI * sn * cs * cs - M_PI * sn * sn * sn;
}

VectorField window_field(const Window& w, const Vec4& dir, int p) {
  VectorField f;
  f.value = [w, dir, p](double t) {
    return inside(w, t) ? profile(p, local_s(w, t)) * dir : Vec4{};
  };
  f.derivative = [w, dir, p](double t) {
    return inside(w, t) ? (profile_ds(p, local_s(w, t)) / w.delta) * dir : Vec4{};
  };
  return f;
}

VectorField combine(const VectorField& x, const VectorField& y, double sy) {
  return {[x, y, sy](double t) { return x.value(t) + sy * y.value(t); },
          [x, y, sy](double t) { return x.derivative(t) + sy * y.derivative(t); }};
}

// Fourth-order second difference of eps -> U(gamma + eps h).
Mat4 second_difference(const connection::Connection& a, const Curve& gamma, const VectorField& h,
                       double eps, const std::vector<double>& breaks,
                       const transport::TransportOptions& opt) {
  auto u = [&](double e) {
    return transport::gauge_transport(a, transport::perturbed(gamma, h, e, breaks), opt).u_end();
  };
  const Mat4 s = -1.0 * u(2 * eps) + 16.0 * u(eps) - 30.0 * u(0.0) + 16.0 * u(-eps) - 1.0 * u(-2 * eps);
  return (1.0 / (12 * eps * eps)) * s;
}

Mat4 form_on(const connection::FormMat& f, const Vec4& x, const Vec4& y) {
  Mat4 out;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      if (x[m] * y[n] != 0.0) out += (x[m] * y[n]) * f[m][n];
  return out;
}

}  // namespace

VectorField window_u(const Window& w) { return window_field(w, w.a, 0); }
VectorField window_v(const Window& w) { return window_field(w, w.b, w.same_profile ? 0 : 1); }

double SecondVariation::relative_error() const {
  return frobenius_norm(fd - predicted) / frobenius_norm(predicted);
}

SecondVariation window_second_variation(const connection::Connection& a, const Curve& gamma,
                                        const Window& w, double eps_scale, int steps, int window_steps) {
  const std::vector<double> breaks{w.t0, w.t0 + w.delta};
  transport::TransportOptions opt;
  opt.steps = steps;
  opt.min_segment_steps = window_steps;
  opt.extra_breakpoints = breaks;

  const VectorField u = window_u(w), v = window_v(w);
  const double eps = eps_scale * w.delta;

  SecondVariation out;
  const Mat4 sp = second_difference(a, gamma, combine(u, v, 1.0), eps, breaks, opt);
  const Mat4 sm = second_difference(a, gamma, combine(u, v, -1.0), eps, breaks, opt);
  out.fd = 0.25 * (sp - sm);

  const levy::TransportKernels tk =
      levy::transport_kernels(a, geometry::MetricChart::flat(), gamma, opt);
  const auto& grid = tk.kernels.grid;
  const std::size_t n = grid.size();
  std::vector<Mat4> lv(n), sg(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = grid.t(k);
    const Vec4 uu = u.value(t), vv = v.value(t), du = u.derivative(t), dv = v.derivative(t);
    for (int m = 0; m < 4; ++m)
      for (int nn = 0; nn < 4; ++nn) {
        const double cl = uu[m] * vv[nn];
        const double cs = 0.5 * (du[m] * vv[nn] + dv[m] * uu[nn]);
        if (cl != 0.0) lv[k] += cl * tk.kernels.levy[k][4 * m + nn];
        if (cs != 0.0) sg[k] += cs * tk.kernels.singular[k][4 * m + nn];
      }
  }
  out.levy = grid.integrate(lv);
  out.singular = grid.integrate(sg);

  // Ordered pairs s < t: U_{1,t} F(x(t), g') U_{t,s} F(y(s), g') U_{s,0}, summed over
  // (x, y) = (u, v), (v, u). Inner integral by cumulative trapezoid of
  // U_{s,0}^T F(y(s), g') U_{s,0}.
  auto ordered = [&](const VectorField& x, const VectorField& y) {
    std::vector<Mat4> outer(n);
    Mat4 cum, prev;
    for (std::size_t k = 0; k < n; ++k) {
      const double t = grid.t(k);
      const Mat4& u0 = tk.path.u[k];
      const Mat4 m = u0.transposed() * form_on(tk.f[k], y.value(t), tk.path.v[k]) * u0;
      if (k > 0) cum += (0.5 * (t - grid.t(k - 1))) * (m + prev);
      prev = m;
      outer[k] = tk.u_1t[k] * form_on(tk.f[k], x.value(t), tk.path.v[k]) * u0 * cum;
    }
    return grid.integrate(outer);
  };
  out.volterra = ordered(u, v) + ordered(v, u);
  out.predicted = out.levy + out.singular + out.volterra;
  return out;
}

template <class C>
levy::KernelTriple<C> conjugate_kernels(const levy::KernelTriple<C>& q, const algebra::RotationCurve& w,
                                        double h) {
  levy::KernelTriple<C> out;
  out.grid = q.grid;
  const std::size_t n = q.grid.size();
  out.levy.resize(n);
  out.singular.resize(n);
  // (A^T Q B)_ab = sum_cd A_ca Q_cd B_db
  auto sandwich = [](const Mat4& a, const levy::Block<C>& blk, const Mat4& b) {
    levy::Block<C> r{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) {
            const double s = a(c, i) * b(d, j);
            if (s != 0.0) r[4 * i + j] += s * blk[4 * c + d];
          }
    return r;
  };
  for (std::size_t k = 0; k < n; ++k) {
    const double t = q.grid.t(k);
    const Mat4 wt = w.W(t);
    // Mean of the one-sided second-order stencils: W is only C^1 where a node-list
    // generator has a kink, and a central difference straddling it is first order.
    auto forward = [&] { return (1.0 / (2 * h)) * (-3.0 * w.W(t) + 4.0 * w.W(t + h) - w.W(t + 2 * h)); };
    auto backward = [&] { return (1.0 / (2 * h)) * (3.0 * w.W(t) - 4.0 * w.W(t - h) + w.W(t - 2 * h)); };
    Mat4 wd;
    if (t - 2 * h < 0.0)
      wd = forward();
    else if (t + 2 * h > 1.0)
      wd = backward();
    else
      wd = 0.5 * (forward() + backward());
    const levy::Block<C> l = sandwich(wt, q.levy[k], wt);
    const levy::Block<C> s = sandwich(wd, q.singular[k], wt);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) out.levy[k][4 * i + j] = l[4 * i + j] + 0.5 * (s[4 * i + j] + s[4 * j + i]);
    out.singular[k] = sandwich(wt, q.singular[k], wt);
  }
  return out;
}

template levy::KernelTriple<double> conjugate_kernels(const levy::KernelTriple<double>&,
                                                      const algebra::RotationCurve&, double);
template levy::KernelTriple<Mat4> conjugate_kernels(const levy::KernelTriple<Mat4>&,
                                                    const algebra::RotationCurve&, double);

namespace {

template <class C, class Draw>
levy::KernelTriple<C> random_triple(int steps, Draw draw) {
  levy::KernelTriple<C> q;
  q.grid = TimeGrid::uniform(steps);
  // Q(t) = A + B cos 2 pi t + D sin 2 pi t entrywise.
  std::array<levy::Block<C>, 3> l{}, s{};
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        l[c][4 * i + j] = draw();
        l[c][4 * j + i] = l[c][4 * i + j];
        if (i != j) {
          s[c][4 * i + j] = draw();
          s[c][4 * j + i] = -1.0 * s[c][4 * i + j];
        }
      }
  for (std::size_t k = 0; k < q.grid.size(); ++k) {
    const double t = q.grid.t(k), cs = std::cos(2 * M_PI * t), sn = std::sin(2 * M_PI * t);
    levy::Block<C> lb{}, sb{};
    for (int e = 0; e < 16; ++e) {
      lb[e] = l[0][e] + cs * l[1][e] + sn * l[2][e];
      sb[e] = s[0][e] + cs * s[1][e] + sn * s[2][e];
    }
    q.levy.push_back(lb);
    q.singular.push_back(sb);
  }
  return q;
}

}  // namespace

levy::KernelTriple<double> random_scalar_triple(Rng& rng, int steps) {
  return random_triple<double>(steps, [&] { return rng.normal(); });
}

levy::KernelTriple<Mat4> random_matrix_triple(Rng& rng, int steps) {
  return random_triple<Mat4>(steps, [&] {
    Mat4 m;
    for (double& x : m.v) x = rng.normal();
    return m;
  });
}

Mat4 random_so4(Rng& rng, double size) {
  Mat4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const double x = size * rng.normal();
      m(i, j) = x;
      m(j, i) = -x;
    }
  return m;
}

Mat4 random_left(Rng& rng, double size) {
  return algebra::left_matrix(size * rng.normal(), size * rng.normal(), size * rng.normal());
}

algebra::RotationCurve random_rotation_curve(Rng& rng, int index) {
  switch (index % 5) {
    case 0:
      return algebra::RotationCurve::constant(random_so4(rng, 2.0));
    case 1:
      return algebra::RotationCurve::constant(random_left(rng, 3.0));
    case 2:
      return algebra::RotationCurve::trigonometric(random_so4(rng), {random_so4(rng)}, {random_so4(rng)});
    case 3:
      return algebra::RotationCurve::product_exp(random_left(rng, 2.0),
                                                 algebra::right_matrix(rng.normal(), rng.normal(), rng.normal()));
    default:
      return algebra::RotationCurve::nodes({random_so4(rng), random_so4(rng), random_left(rng)});
  }
}

}  // namespace levylap::oracle
