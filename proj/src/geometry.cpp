#include "levylap/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "levylap/errors.hpp"

namespace levylap::geometry {

// --- ScalarField -----------------------------------------------------------

ScalarField ScalarField::constant(double c) {
  ScalarField f;
  f.family_ = Family::Constant;
  f.amplitude_ = c;
  return f;
}

ScalarField ScalarField::linear(const Vec4& direction) {
  ScalarField f;
  f.family_ = Family::Linear;
  f.direction_ = direction;
  return f;
}

ScalarField ScalarField::quadratic(double amplitude, const Point4& center) {
  ScalarField f;
  f.family_ = Family::Quadratic;
  f.amplitude_ = amplitude;
  f.center_ = center;
  return f;
}

ScalarField ScalarField::product(int i, int j, double amplitude) {
  if (i == j || i < 0 || j < 0 || i > 3 || j > 3) {
    throw ContractViolation("ScalarField::product: need distinct indices in 0..3");
  }
  ScalarField f;
  f.family_ = Family::Product;
  f.amplitude_ = amplitude;
  f.i_ = i;
  f.j_ = j;
  return f;
}

ScalarField ScalarField::gaussian(double amplitude, const Point4& center, double width) {
  if (!(width > 0.0)) throw ContractViolation("ScalarField::gaussian: width must be positive");
  ScalarField f;
  f.family_ = Family::Gaussian;
  f.amplitude_ = amplitude;
  f.center_ = center;
  f.width_ = width;
  return f;
}

ScalarField ScalarField::stereographic(double radius) {
  if (!(radius > 0.0)) throw ContractViolation("ScalarField::stereographic: radius must be positive");
  ScalarField f;
  f.family_ = Family::Stereographic;
  f.amplitude_ = radius;
  return f;
}

double ScalarField::value(const Point4& x) const {
  switch (family_) {
    case Family::Constant:
      return amplitude_;
    case Family::Linear:
      return dot(direction_, x);
    case Family::Quadratic: {
      const Vec4 d = x - center_;
      return amplitude_ * dot(d, d);
    }
    case Family::Product:
      return amplitude_ * x[i_] * x[j_];
    case Family::Gaussian: {
      const Vec4 d = x - center_;
      return amplitude_ * std::exp(-dot(d, d) / (2.0 * width_ * width_));
    }
    case Family::Stereographic:
      return std::log(2.0 * amplitude_) - std::log1p(dot(x, x));
  }
  return 0.0;
}

Vec4 ScalarField::gradient(const Point4& x) const {
  switch (family_) {
    case Family::Constant:
      return {};
    case Family::Linear:
      return direction_;
    case Family::Quadratic:
      return (2.0 * amplitude_) * (x - center_);
    case Family::Product: {
      Vec4 g{};
      g[i_] = amplitude_ * x[j_];
      g[j_] = amplitude_ * x[i_];
      return g;
    }
    case Family::Gaussian: {
      const Vec4 d = x - center_;
      const double s2 = width_ * width_;
      return (-value(x) / s2) * d;
    }
    case Family::Stereographic:
      return (-2.0 / (1.0 + dot(x, x))) * x;
  }
  return {};
}

Mat4 ScalarField::hessian(const Point4& x) const {
  switch (family_) {
    case Family::Constant:
    case Family::Linear:
      return {};
    case Family::Quadratic:
      return (2.0 * amplitude_) * Mat4::identity();
    case Family::Product: {
      Mat4 h;
      h(i_, j_) = amplitude_;
      h(j_, i_) = amplitude_;
      return h;
    }
    case Family::Gaussian: {
      const Vec4 d = x - center_;
      const double s2 = width_ * width_;
      return value(x) * (Mat4::outer(d, d) * (1.0 / (s2 * s2)) - Mat4::identity() * (1.0 / s2));
    }
    case Family::Stereographic: {
      const double q = 1.0 + dot(x, x);
      return Mat4::identity() * (-2.0 / q) + Mat4::outer(x, x) * (4.0 / (q * q));
    }
  }
  return {};
}

std::string ScalarField::describe() const {
  std::ostringstream os;
  switch (family_) {
    case Family::Constant:
      os << "constant(" << amplitude_ << ")";
      break;
    case Family::Linear:
      os << "linear";
      break;
    case Family::Quadratic:
      os << "quadratic(" << amplitude_ << ")";
      break;
    case Family::Product:
      os << "product(" << i_ << "," << j_ << "," << amplitude_ << ")";
      break;
    case Family::Gaussian:
      os << "gaussian(" << amplitude_ << "," << width_ << ")";
      break;
    case Family::Stereographic:
      os << "stereographic(" << amplitude_ << ")";
      break;
  }
  return os.str();
}

// --- MetricChart -------------------------------------------------------------

MetricChart MetricChart::flat() { return MetricChart{}; }

MetricChart MetricChart::conformally_flat(ScalarField phi) {
  MetricChart c;
  c.preset_ = Preset::ConformallyFlat;
  c.phi_ = std::move(phi);
  return c;
}

MetricChart MetricChart::round_s4(double radius) {
  MetricChart c;
  c.preset_ = Preset::RoundS4;
  c.radius_ = radius;
  c.phi_ = ScalarField::stereographic(radius);
  return c;
}

MetricChart MetricChart::s1xs3(double radius) {
  if (!(radius > 0.0)) throw ContractViolation("s1xs3: radius must be positive");
  MetricChart c;
  c.preset_ = Preset::S1xS3;
  c.radius_ = radius;
  return c;
}

MetricChart MetricChart::with_orientation(Orientation o) const {
  MetricChart c = *this;
  c.orientation_ = o;
  return c;
}

std::string MetricChart::name() const {
  std::string base;
  switch (preset_) {
    case Preset::Flat:
      base = "Flat";
      break;
    case Preset::ConformallyFlat:
      base = "ConformallyFlat[" + phi_.describe() + "]";
      break;
    case Preset::RoundS4:
      base = "RoundS4";
      break;
    case Preset::S1xS3:
      base = "S1xS3";
      break;
  }
  if (orientation_ == Orientation::Left) base += "(left-handed)";
  return base;
}

void MetricChart::check_domain(const Point4& x) const {
  for (double c : x) {
    if (!std::isfinite(c)) throw DomainError(name() + ": non-finite chart point");
  }
  if (preset_ == Preset::S1xS3 && std::fabs(x[0]) > M_PI + 1e-12) {
    throw DomainError("S1xS3: angular coordinate outside [-pi, pi]; wrap it first");
  }
}

Point4 MetricChart::wrap(const Point4& x) const {
  if (preset_ != Preset::S1xS3) return x;
  Point4 y = x;
  y[0] = std::remainder(x[0], 2.0 * M_PI);
  if (y[0] >= M_PI) y[0] -= 2.0 * M_PI;
  return y;
}

Mat4 MetricChart::metric(const Point4& x) const {
  check_domain(x);
  if (preset_ == Preset::Flat) return Mat4::identity();
  if (preset_ == Preset::S1xS3) {
    const double q = 1.0 + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    const double c2 = 4.0 * radius_ * radius_ / (q * q);
    return Mat4::diagonal({1.0, c2, c2, c2});
  }
  return Mat4::identity() * std::exp(2.0 * phi_.value(x));
}

std::array<Mat4, 4> MetricChart::metric_derivatives(const Point4& x) const {
  check_domain(x);
  std::array<Mat4, 4> d{};
  if (preset_ == Preset::Flat) return d;
  if (preset_ == Preset::S1xS3) {
    const double q = 1.0 + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    const double r2 = radius_ * radius_;
    for (int s = 1; s < 4; ++s) {
      const double dc2 = -16.0 * r2 * x[s] / (q * q * q);
      d[s] = Mat4::diagonal({0.0, dc2, dc2, dc2});
    }
    return d;
  }
  const double e2 = std::exp(2.0 * phi_.value(x));
  const Vec4 g = phi_.gradient(x);
  for (int s = 0; s < 4; ++s) d[s] = Mat4::identity() * (2.0 * g[s] * e2);
  return d;
}

// --- free functions ------------------------------------------------------------

Mat4 metric_eval(const MetricChart& chart, const Point4& x) { return chart.metric(x); }

Christoffel christoffel_from_metric(const Mat4& g, const std::array<Mat4, 4>& dg) {
  const Mat4 gi = inverse(g);
  Christoffel gamma{};
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      for (int n = l; n < 4; ++n) {
        double s = 0.0;
        for (int m = 0; m < 4; ++m) {
          s += gi(k, m) * (dg[l](m, n) + dg[n](m, l) - dg[m](l, n));
        }
        gamma[k](l, n) = 0.5 * s;
        gamma[k](n, l) = 0.5 * s;
      }
    }
  }
  return gamma;
}

Christoffel christoffel(const MetricChart& chart, const Point4& x) {
  chart.check_domain(x);
  Christoffel gamma{};
  switch (chart.preset()) {
    case MetricChart::Preset::Flat:
      return gamma;
    case MetricChart::Preset::S1xS3: {
      const Mat4 g = chart.metric(x);
      if (!(g(1, 1) > 0.0) || !std::isfinite(g(1, 1))) {
        throw NumericError("christoffel: degenerate metric");
      }
      return christoffel_from_metric(g, chart.metric_derivatives(x));
    }
    default: {
      // Gamma^k_ln = delta^k_l d_n phi + delta^k_n d_l phi - delta_ln d_k phi
      const Vec4 dphi = chart.conformal_factor().gradient(x);
      for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) {
          for (int n = 0; n < 4; ++n) {
            double v = 0.0;
            if (k == l) v += dphi[n];
            if (k == n) v += dphi[l];
            if (l == n) v -= dphi[k];
            gamma[k](l, n) = v;
          }
        }
      }
      return gamma;
    }
  }
}

Christoffel christoffel_numeric(const MetricChart& chart, const Point4& x, double h) {
  std::array<Mat4, 4> dg{};
  for (int s = 0; s < 4; ++s) {
    auto at = [&](double off) {
      Point4 y = x;
      y[s] += off;
      return chart.metric(y);
    };
    dg[s] = (at(-2 * h) - at(2 * h) + 8.0 * (at(h) - at(-h))) * (1.0 / (12.0 * h));
  }
  return christoffel_from_metric(chart.metric(x), dg);
}

double volume_density(const MetricChart& chart, const Point4& x) {
  const double det = determinant(chart.metric(x));
  if (!(det > 0.0) || !std::isfinite(det)) throw NumericError("volume_density: degenerate metric");
  return std::sqrt(det);
}

int levi_civita_symbol(int a, int b, int c, int d) {
  const int p[4] = {a, b, c, d};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[i] == p[j]) return 0;
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[i] > p[j]) sign = -sign;
  return sign;
}

namespace {

// (star w)_mn = (1/2) s sqrt(g) eps_abmn w^ab, with w^ab already raised.
Mat4 star_raised(const Mat4& w_up, double scale) {
  Mat4 out;
  for (int m = 0; m < 4; ++m) {
    for (int n = m + 1; n < 4; ++n) {
      double s = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) s += levi_civita_symbol(a, b, m, n) * w_up(a, b);
      out(m, n) = scale * s;
      out(n, m) = -scale * s;
    }
  }
  return out;
}

}  // namespace

TwoForm lower(const Mat4& g, const Bivector& b) { return {g * b.c * g.transposed()}; }
Bivector raise(const Mat4& gi, const TwoForm& w) { return {gi * w.c * gi.transposed()}; }

Mat4 hodge_star_orthonormal(const Mat4& w, double orientation_sign) {
  return star_raised(w, orientation_sign);
}

TwoForm hodge_star(const MetricChart& chart, const Point4& x, const TwoForm& w) {
  const Mat4 g = chart.metric(x);
  const Mat4 gi = inverse(g);
  const double sqrt_g = std::sqrt(determinant(g));
  return {star_raised(raise(gi, w).c, chart.orientation_sign() * sqrt_g)};
}

Bivector hodge_star(const MetricChart& chart, const Point4& x, const Bivector& b) {
  const Mat4 g = chart.metric(x);
  const Mat4 gi = inverse(g);
  const double sqrt_g = std::sqrt(determinant(g));
  const Mat4 starred = star_raised(b.c, chart.orientation_sign() * sqrt_g);
  return raise(gi, TwoForm{starred});
}

double pairing(const TwoForm& f, const Bivector& b) {
  return 0.5 * frobenius_dot(f.c, b.c);
}

double inner(const Mat4& g, const Bivector& a, const Bivector& b) {
  return 0.5 * frobenius_dot(lower(g, a).c, b.c);
}

Bivector wedge(const Vec4& a, const Vec4& b) {
  return {Mat4::outer(a, b) - Mat4::outer(b, a)};
}

SelfDualBasis selfdual_basis(const Mat4& frame, const Mat4& metric, Orientation orientation,
                             double tolerance) {
  const double defect = max_abs(frame.transposed() * metric * frame - Mat4::identity());
  if (defect > tolerance) {
    throw ContractViolation("selfdual_basis: frame is not orthonormal (defect " +
                            std::to_string(defect) + ")");
  }
  const double s = orientation == Orientation::Right ? 1.0 : -1.0;
  if (s * determinant(frame) <= 0.0) {
    throw ContractViolation("selfdual_basis: frame is not positively oriented");
  }
  std::array<Vec4, 4> e;
  for (int i = 0; i < 4; ++i) e[i] = frame.column(i);
  const double k = 1.0 / std::sqrt(2.0);
  const Mat4 e12 = wedge(e[0], e[1]).c, e34 = wedge(e[2], e[3]).c;
  const Mat4 e13 = wedge(e[0], e[2]).c, e24 = wedge(e[1], e[3]).c;
  const Mat4 e14 = wedge(e[0], e[3]).c, e23 = wedge(e[1], e[2]).c;
  SelfDualBasis out;
  out.plus = {Bivector{k * (e12 + e34)}, Bivector{k * (e13 - e24)}, Bivector{k * (e14 + e23)}};
  out.minus = {Bivector{k * (e12 - e34)}, Bivector{k * (e13 + e24)}, Bivector{k * (e14 - e23)}};
  return out;
}

Mat4 orthonormal_frame(const MetricChart& chart, const Point4& x) {
  const Mat4 g = chart.metric(x);
  Eigen::Matrix4d gm;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) gm(i, j) = g(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(gm);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw NumericError("orthonormal_frame: metric is not positive definite");
  }
  const Eigen::Matrix4d inv_sqrt = es.operatorInverseSqrt();
  Mat4 e;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) e(i, j) = inv_sqrt(i, j);
  if (chart.orientation() == Orientation::Left) {
    for (int i = 0; i < 4; ++i) e(i, 3) = -e(i, 3);
  }
  return e;
}

double laplace_beltrami(const MetricChart& chart, const Point4& x, const ScalarField& f) {
  const Mat4 gi = inverse(chart.metric(x));
  const Christoffel gamma = christoffel(chart, x);
  const Vec4 df = f.gradient(x);
  const Mat4 hf = f.hessian(x);
  double s = 0.0;
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      double cov = hf(m, n);
      for (int k = 0; k < 4; ++k) cov -= gamma[k](m, n) * df[k];
      s += gi(m, n) * cov;
    }
  }
  return s;
}

}  // namespace levylap::geometry
