#include <cmath>
#include <string>

#include "levylap/algebra.hpp"
#include "levylap/errors.hpp"
#include "levylap/quadrature.hpp"

namespace levylap::algebra {

struct RotationCurve::Impl {
  Kind kind = Kind::Constant;
  Side side = Side::General;
  Mat4 c;  // constant part, or X for ProductExp
  Mat4 y;  // Y for ProductExp
  std::vector<Mat4> cos_terms, sin_terms, nodes;
  int steps = 0;
  std::vector<Mat4> w;  // W at uniform Magnus nodes

  Mat4 generator(double t) const {
    switch (kind) {
      case Kind::Constant:
        return c;
      case Kind::ProductExp:
        return exp_so4(-t * y) * c * exp_so4(t * y) + y;
      case Kind::Trigonometric: {
        Mat4 g = c;
        for (std::size_t k = 0; k < cos_terms.size(); ++k) {
          g += std::cos(2.0 * M_PI * double(k + 1) * t) * cos_terms[k];
        }
        for (std::size_t k = 0; k < sin_terms.size(); ++k) {
          g += std::sin(2.0 * M_PI * double(k + 1) * t) * sin_terms[k];
        }
        return g;
      }
      case Kind::Nodes: {
        const int segs = int(nodes.size()) - 1;
        const double s = t * segs;
        const int k = std::min(segs - 1, std::max(0, int(std::floor(s))));
        const double u = s - k;
        return (1.0 - u) * nodes[k] + u * nodes[k + 1];
      }
    }
    return {};
  }

  // W(b) = W(a) exp(Omega) with the two-point Gauss Magnus expansion.
  Mat4 magnus_step(double a, double b) const {
    const double h = b - a;
    if (h == 0.0) return Mat4::identity();
    const double d = std::sqrt(3.0) / 6.0;
    const Mat4 l1 = generator(a + (0.5 - d) * h);
    const Mat4 l2 = generator(a + (0.5 + d) * h);
    const Mat4 omega = (0.5 * h) * (l1 + l2) + (std::sqrt(3.0) / 12.0 * h * h) * commutator(l1, l2);
    return exp_so4(omega);
  }

  void integrate() {
    w.resize(steps + 1);
    w[0] = Mat4::identity();
    for (int n = 0; n < steps; ++n) {
      w[n + 1] = polar_project(w[n] * magnus_step(double(n) / steps, double(n + 1) / steps));
    }
  }

  void infer_side(std::initializer_list<const std::vector<Mat4>*> groups, const Mat4& extra) {
    double left = frobenius_norm(project_left(extra));
    double right = frobenius_norm(project_right(extra));
    double scale = frobenius_norm(extra);
    for (const auto* g : groups) {
      for (const Mat4& m : *g) {
        left += frobenius_norm(project_left(m));
        right += frobenius_norm(project_right(m));
        scale += frobenius_norm(m);
      }
    }
    const double tol = 1e-14 * std::fmax(scale, 1.0);
    if (right <= tol) {
      side = Side::Left;
    } else if (left <= tol) {
      side = Side::Right;
    } else {
      side = Side::General;
    }
  }
};

namespace {

void check_time(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("rotation curve: t = " + std::to_string(t) + " outside [0, 1]");
  }
}

}  // namespace

RotationCurve RotationCurve::identity() { return constant(Mat4::zero()); }

RotationCurve RotationCurve::constant(const Mat4& generator) {
  require_antisymmetric(generator, "RotationCurve::constant");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Constant;
  impl->c = generator;
  impl->infer_side({}, generator);
  RotationCurve r;
  r.impl_ = std::move(impl);
  return r;
}

RotationCurve RotationCurve::trigonometric(const Mat4& c, std::vector<Mat4> cos_terms,
                                           std::vector<Mat4> sin_terms, int steps) {
  if (steps < 2) throw ContractViolation("RotationCurve::trigonometric: steps < 2");
  require_antisymmetric(c, "RotationCurve::trigonometric");
  for (const auto& m : cos_terms) require_antisymmetric(m, "RotationCurve::trigonometric");
  for (const auto& m : sin_terms) require_antisymmetric(m, "RotationCurve::trigonometric");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Trigonometric;
  impl->c = c;
  impl->cos_terms = std::move(cos_terms);
  impl->sin_terms = std::move(sin_terms);
  impl->steps = steps;
  impl->infer_side({&impl->cos_terms, &impl->sin_terms}, c);
  impl->integrate();
  RotationCurve r;
  r.impl_ = std::move(impl);
  return r;
}

RotationCurve RotationCurve::nodes(std::vector<Mat4> generators, int steps) {
  if (generators.size() < 2) throw ContractViolation("RotationCurve::nodes: need at least two nodes");
  for (const auto& m : generators) require_antisymmetric(m, "RotationCurve::nodes");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Nodes;
  const int segs = int(generators.size()) - 1;
  impl->nodes = std::move(generators);
  // Magnus nodes must include the generator's kinks.
  impl->steps = segs * std::max(1, (steps + segs - 1) / segs);
  impl->infer_side({&impl->nodes}, Mat4::zero());
  impl->integrate();
  RotationCurve r;
  r.impl_ = std::move(impl);
  return r;
}

RotationCurve RotationCurve::product_exp(const Mat4& x, const Mat4& y) {
  require_antisymmetric(x, "RotationCurve::product_exp");
  require_antisymmetric(y, "RotationCurve::product_exp");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::ProductExp;
  impl->c = x;
  impl->y = y;
  std::vector<Mat4> both{y};
  impl->infer_side({&both}, x);
  RotationCurve r;
  r.impl_ = std::move(impl);
  return r;
}

RotationCurve::Kind RotationCurve::kind() const { return impl_->kind; }
Side RotationCurve::side() const { return impl_->side; }

void RotationCurve::require_side(Side s, const char* where) const {
  if (impl_->side != s) {
    throw ContractViolation(std::string(where) + ": rotation curve must be side " + to_string(s) +
                            ", got " + to_string(impl_->side));
  }
}

Mat4 RotationCurve::W(double t) const {
  check_time(t);
  const Impl& m = *impl_;
  switch (m.kind) {
    case Kind::Constant:
      return exp_so4(t * m.c);
    case Kind::ProductExp:
      return exp_so4(t * m.c) * exp_so4(t * m.y);
    default: {
      const int n = std::min(m.steps - 1, int(std::floor(t * m.steps)));
      const double tn = double(n) / m.steps;
      return m.w[n] * m.magnus_step(tn, t);
    }
  }
}

Mat4 RotationCurve::log_derivative(double t) const {
  check_time(t);
  return impl_->generator(t);
}

Mat4 RotationCurve::right_log_derivative(double t) const {
  check_time(t);
  const Impl& m = *impl_;
  if (m.kind == Kind::Constant) return m.c;
  if (m.kind == Kind::ProductExp) return m.c + exp_so4(t * m.c) * m.y * exp_so4(-t * m.c);
  const Mat4 w = W(t);
  return w * m.generator(t) * w.transposed();
}

Mat4 RotationCurve::integrated(Derivative d, int intervals) const {
  if (intervals < 2 || intervals % 2 != 0) {
    throw ContractViolation("RotationCurve::integrated: intervals must be even and >= 2");
  }
  Mat4 sum;
  const double h = 1.0 / intervals;
  for (int k = 0; k <= intervals; ++k) {
    const double w = (k == 0 || k == intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += (w * h / 3.0) * derivative(double(k) * h, d);
  }
  return sum;
}

Omega alpha_coefficients(const RotationCurve& w, Derivative d, int intervals) {
  return omega_coefficients(w.integrated(d, intervals));
}

}  // namespace levylap::algebra
