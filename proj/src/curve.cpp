#include <algorithm>
#include <cmath>
#include <sstream>

#include "levylap/errors.hpp"
#include "levylap/rng.hpp"
#include "levylap/transport.hpp"

namespace levylap::transport {

struct Curve::Impl {
  std::function<CurvePoint(double, int)> f;
  std::vector<double> breaks;
  std::string name;
};

namespace {

Vec4 axis_vec(int i) {
  if (i < 0 || i > 3) throw ContractViolation("curve: axis index outside 0..3");
  Vec4 e{};
  e[i] = 1.0;
  return e;
}

void check_time(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("curve: t = " + std::to_string(t) + " outside [0, 1]");
  }
}

}  // namespace

Curve Curve::from_sided_function(std::function<CurvePoint(double, int)> f, std::vector<double> breaks,
                                 std::string name) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [](double b) { return !(b > 0.0 && b < 1.0); }),
               breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return std::fabs(a - b) < 1e-14; }),
               breaks.end());
  auto impl = std::make_shared<Impl>();
  impl->f = std::move(f);
  impl->breaks = std::move(breaks);
  impl->name = std::move(name);
  Curve c;
  c.impl_ = std::move(impl);
  return c;
}

Curve Curve::from_function(std::function<CurvePoint(double)> f, std::vector<double> breaks, std::string name) {
  return from_sided_function([f = std::move(f)](double t, int) { return f(t); }, std::move(breaks),
                             std::move(name));
}

CurvePoint Curve::point(double t, int side) const {
  check_time(t);
  return impl_->f(t, side);
}

bool Curve::is_loop(double tolerance) const {
  const Vec4 d = endpoint() - basepoint();
  return norm(d) <= tolerance;
}

const std::vector<double>& Curve::breakpoints() const { return impl_->breaks; }
const std::string& Curve::name() const { return impl_->name; }

double Curve::energy(const MetricChart& chart, int intervals) const {
  // Simpson per smooth piece.
  std::vector<double> cuts{0.0};
  for (double b : impl_->breaks) cuts.push_back(b);
  cuts.push_back(1.0);
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    const int n = std::max(2, 2 * int(std::ceil(0.5 * intervals * (b - a))));
    const double h = (b - a) / n;
    for (int i = 0; i <= n; ++i) {
      const double t = i == n ? b : a + i * h;
      const int side = i == 0 ? 1 : (i == n ? -1 : 0);
      const CurvePoint p = point(t, side);
      const Mat4 g = chart.metric(p.x);
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      total += w * h / 3.0 * dot(p.v, g * p.v);
    }
  }
  return total;
}

Curve Curve::hermite(std::vector<double> t, std::vector<Point4> x, std::vector<Vec4> dx) {
  const std::size_t n = t.size();
  if (n < 2 || x.size() != n) throw ContractViolation("hermite: need matching t and x with >= 2 nodes");
  if (std::fabs(t.front()) > 1e-15 || std::fabs(t.back() - 1.0) > 1e-15) {
    throw ContractViolation("hermite: nodes must start at 0 and end at 1");
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!(t[k + 1] > t[k])) throw ContractViolation("hermite: node times must increase");
  }
  if (dx.empty()) {
    dx.resize(n);
    const bool closed = norm(x.back() - x.front()) <= 1e-10 && n > 2;
    auto slope = [&](std::size_t a, std::size_t b) { return (1.0 / (t[b] - t[a])) * (x[b] - x[a]); };
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double h0 = t[k] - t[k - 1], h1 = t[k + 1] - t[k];
      dx[k] = (1.0 / (h0 + h1)) * (h1 * slope(k - 1, k) + h0 * slope(k, k + 1));
    }
    if (closed) {
      const double h0 = t[n - 1] - t[n - 2], h1 = t[1] - t[0];
      const Vec4 d = (1.0 / (h0 + h1)) * (h1 * slope(n - 2, n - 1) + h0 * slope(0, 1));
      dx[0] = dx[n - 1] = d;
    } else {
      dx[0] = slope(0, 1);
      dx[n - 1] = slope(n - 2, n - 1);
    }
  } else if (dx.size() != n) {
    throw ContractViolation("hermite: derivative count mismatch");
  }
  std::vector<double> breaks(t.begin() + 1, t.end() - 1);
  auto f = [t, x, dx](double s, int side) {
    std::size_t k = std::upper_bound(t.begin(), t.end(), s) - t.begin();
    k = k == 0 ? 0 : k - 1;
    if (side < 0 && k > 0 && s == t[k]) --k;
    k = std::min(k, t.size() - 2);
    const double h = t[k + 1] - t[k];
    const double u = (s - t[k]) / h;
    const double u2 = u * u, u3 = u2 * u;
    CurvePoint p;
    p.x = (2 * u3 - 3 * u2 + 1) * x[k] + ((u3 - 2 * u2 + u) * h) * dx[k] + (-2 * u3 + 3 * u2) * x[k + 1] +
          ((u3 - u2) * h) * dx[k + 1];
    p.v = ((6 * u2 - 6 * u) / h) * x[k] + (3 * u2 - 4 * u + 1) * dx[k] + ((-6 * u2 + 6 * u) / h) * x[k + 1] +
          (3 * u2 - 2 * u) * dx[k + 1];
    return p;
  };
  return from_sided_function(f, breaks, "hermite(" + std::to_string(n) + ")");
}

Curve Curve::circle(const Point4& center, double radius, int i, int j) {
  const Vec4 ei = axis_vec(i), ej = axis_vec(j);
  if (i == j) throw ContractViolation("circle: plane axes must differ");
  auto f = [=](double t) {
    const double a = 2.0 * M_PI * t;
    CurvePoint p;
    p.x = center + (radius * std::cos(a)) * ei + (radius * std::sin(a)) * ej;
    p.v = (-2.0 * M_PI * radius * std::sin(a)) * ei + (2.0 * M_PI * radius * std::cos(a)) * ej;
    return p;
  };
  std::ostringstream os;
  os << "circle(r=" << radius << "," << i << j << ")";
  return from_function(f, {}, os.str());
}

Curve Curve::figure_eight(const Point4& base, double size, int i, int j) {
  const Vec4 ei = axis_vec(i), ej = axis_vec(j);
  if (i == j) throw ContractViolation("figure_eight: plane axes must differ");
  auto f = [=](double t) {
    const double a = 2.0 * M_PI * t;
    CurvePoint p;
    p.x = base + (size * std::sin(a)) * ei + (0.5 * size * std::sin(2 * a)) * ej;
    p.v = (2.0 * M_PI * size * std::cos(a)) * ei + (2.0 * M_PI * size * std::cos(2 * a)) * ej;
    return p;
  };
  std::ostringstream os;
  os << "figure_eight(" << size << "," << i << j << ")";
  return from_function(f, {}, os.str());
}

Curve Curve::fourier_loop(std::uint64_t seed, const Point4& base, double scale, int modes) {
  if (modes < 1) throw ContractViolation("fourier_loop: need at least one mode");
  Rng rng(seed);
  std::vector<Vec4> a(modes), b(modes);
  for (int k = 0; k < modes; ++k) {
    for (int c = 0; c < 4; ++c) a[k][c] = rng.normal() * scale / (k + 1);
    for (int c = 0; c < 4; ++c) b[k][c] = rng.normal() * scale / (k + 1);
  }
  auto f = [=](double t) {
    CurvePoint p;
    p.x = base;
    for (int k = 0; k < modes; ++k) {
      const double w = 2.0 * M_PI * (k + 1);
      p.x = p.x + (std::cos(w * t) - 1.0) * a[k] + std::sin(w * t) * b[k];
      p.v = p.v + (-w * std::sin(w * t)) * a[k] + (w * std::cos(w * t)) * b[k];
    }
    return p;
  };
  return from_function(f, {}, "fourier_loop(seed=" + std::to_string(seed) + ")");
}

Curve Curve::segment(const Point4& a, const Point4& b) {
  const Vec4 d = b - a;
  return from_function([=](double t) { return CurvePoint{a + t * d, d}; }, {}, "segment");
}

Curve reparameterize_r(const Curve& gamma, double r) {
  if (!(r > 0.0 && r <= 1.0)) {
    throw DomainError("reparameterize_r: r = " + std::to_string(r) + " outside (0, 1]");
  }
  if (r == 1.0) return gamma;
  std::vector<double> breaks{r};
  for (double b : gamma.breakpoints()) breaks.push_back(r * b);
  const Point4 end = gamma.endpoint();
  auto f = [gamma, r, end](double t, int side) {
    if (t < r || (t == r && side < 0)) {
      CurvePoint p = gamma.point(std::min(1.0, t / r), side);
      p.v = (1.0 / r) * p.v;
      return p;
    }
    return CurvePoint{end, {}};
  };
  return Curve::from_sided_function(f, breaks, gamma.name() + "_r" + std::to_string(r));
}

Curve reversed(const Curve& gamma) {
  std::vector<double> breaks;
  for (double b : gamma.breakpoints()) breaks.push_back(1.0 - b);
  auto f = [gamma](double t, int side) {
    CurvePoint p = gamma.point(1.0 - t, -side);
    p.v = -1.0 * p.v;
    return p;
  };
  return Curve::from_sided_function(f, breaks, "reversed(" + gamma.name() + ")");
}

Curve concatenate(const Curve& gamma, const Curve& eta) {
  if (norm(gamma.endpoint() - eta.basepoint()) > 1e-10) {
    throw ContractViolation("concatenate: curves do not meet");
  }
  std::vector<double> breaks{0.5};
  for (double b : gamma.breakpoints()) breaks.push_back(0.5 * b);
  for (double b : eta.breakpoints()) breaks.push_back(0.5 + 0.5 * b);
  auto f = [gamma, eta](double t, int side) {
    const bool first = t < 0.5 || (t == 0.5 && side < 0);
    CurvePoint p = first ? gamma.point(2.0 * t, side) : eta.point(std::min(1.0, 2.0 * t - 1.0), side);
    p.v = 2.0 * p.v;
    return p;
  };
  return Curve::from_sided_function(f, breaks, gamma.name() + "*" + eta.name());
}

Curve perturbed(const Curve& gamma, const VectorField& h, double eps, std::vector<double> extra_breaks) {
  for (double b : gamma.breakpoints()) extra_breaks.push_back(b);
  auto f = [gamma, h, eps](double t, int side) {
    CurvePoint p = gamma.point(t, side);
    p.x = p.x + eps * h.value(t);
    p.v = p.v + eps * h.derivative(t);
    return p;
  };
  return Curve::from_sided_function(f, extra_breaks, gamma.name() + "+eps h");
}

}  // namespace levylap::transport
