#include <cmath>

#include "levylap/algebra.hpp"
#include "levylap/connection.hpp"
#include "levylap/errors.hpp"

namespace levylap::connection {

struct GaugeField::Impl {
  virtual ~Impl() = default;
  virtual GaugeJet jet(const Point4& x) const = 0;
  std::string name;
};

namespace {

void check_group(const Mat4& psi) {
  const double defect = orthogonality_defect(psi);
  if (!(defect <= 1e-8)) {
    throw ContractViolation("gauge field leaves the structure group (orthogonality defect " +
                            std::to_string(defect) + ")");
  }
  for (int i = 0; i < 3; ++i) {
    if (max_abs(commutator(psi, algebra::right_basis(i))) > 1e-8) {
      throw ContractViolation("gauge field leaves S^3_L");
    }
  }
}

struct IdentityGauge final : GaugeField::Impl {
  GaugeJet jet(const Point4&) const override {
    GaugeJet g;
    g.v = Mat4::identity();
    return g;
  }
};

struct AxialGauge final : GaugeField::Impl {
  Mat4 u;
  Phase phase;

  GaugeJet jet(const Point4& x) const override {
    const Vec4 y = x - phase.center;
    const double arg = dot(phase.wave, x) + phase.offset;
    const double s = std::sin(arg), c = std::cos(arg);
    const double f = phase.amplitude * s + phase.quadratic * dot(y, y);
    Vec4 f1;
    for (int l = 0; l < 4; ++l) f1[l] = phase.amplitude * c * phase.wave[l] + 2.0 * phase.quadratic * y[l];
    double f2[4][4], f3[4][4][4];
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l) {
        f2[k][l] = -phase.amplitude * s * phase.wave[k] * phase.wave[l] + (k == l ? 2.0 * phase.quadratic : 0.0);
        for (int j = 0; j < 4; ++j)
          f3[j][k][l] = -phase.amplitude * c * phase.wave[j] * phase.wave[k] * phase.wave[l];
      }
    // psi = exp(f U) with U^2 = -I; each derivative brings down U.
    const Mat4 psi = std::cos(f) * Mat4::identity() + std::sin(f) * u;
    const Mat4 up = u * psi;
    const Mat4 u2p = -1.0 * psi;
    const Mat4 u3p = -1.0 * up;
    GaugeJet g;
    g.v = psi;
    for (int l = 0; l < 4; ++l) {
      g.d[l] = f1[l] * up;
      for (int k = 0; k < 4; ++k) {
        g.dd[k][l] = f2[k][l] * up + (f1[k] * f1[l]) * u2p;
        for (int j = 0; j < 4; ++j) {
          g.ddd[j][k][l] = f3[j][k][l] * up +
                           (f2[k][l] * f1[j] + f2[l][j] * f1[k] + f2[k][j] * f1[l]) * u2p +
                           (f1[j] * f1[k] * f1[l]) * u3p;
        }
      }
    }
    return g;
  }
};

struct ProductGauge final : GaugeField::Impl {
  GaugeField a, b;
  GaugeJet jet(const Point4& x) const override {
    const GaugeJet p = a.jet(x), q = b.jet(x);
    GaugeJet g;
    g.v = p.v * q.v;
    for (int l = 0; l < 4; ++l) {
      g.d[l] = p.d[l] * q.v + p.v * q.d[l];
      for (int k = 0; k < 4; ++k) {
        g.dd[k][l] = p.dd[k][l] * q.v + p.d[k] * q.d[l] + p.d[l] * q.d[k] + p.v * q.dd[k][l];
        for (int j = 0; j < 4; ++j) {
          g.ddd[j][k][l] = p.ddd[j][k][l] * q.v + p.dd[j][k] * q.d[l] + p.dd[j][l] * q.d[k] +
                           p.dd[k][l] * q.d[j] + p.d[j] * q.dd[k][l] + p.d[k] * q.dd[j][l] +
                           p.d[l] * q.dd[j][k] + p.v * q.ddd[j][k][l];
        }
      }
    }
    return g;
  }
};

struct FunctionGauge final : GaugeField::Impl {
  std::function<Mat4(const Point4&)> f;
  double h = 1e-3;

  Mat4 at(const Point4& x, int a, double da, int b = 0, double db = 0.0, int c = 0, double dc = 0.0) const {
    Point4 y = x;
    y[a] += da;
    y[b] += db;
    y[c] += dc;
    return f(y);
  }

  GaugeJet jet(const Point4& x) const override {
    GaugeJet g;
    g.v = f(x);
    const double i2 = 1.0 / (2.0 * h);
    for (int l = 0; l < 4; ++l) {
      g.d[l] = (at(x, l, -2 * h) - at(x, l, 2 * h) + 8.0 * (at(x, l, h) - at(x, l, -h))) * (1.0 / (12.0 * h));
      for (int k = 0; k < 4; ++k) {
        g.dd[k][l] = (at(x, k, h, l, h) - at(x, k, h, l, -h) - at(x, k, -h, l, h) + at(x, k, -h, l, -h)) *
                     (i2 * i2);
        for (int j = 0; j < 4; ++j) {
          Mat4 s;
          for (int sj = -1; sj <= 1; sj += 2)
            for (int sk = -1; sk <= 1; sk += 2)
              for (int sl = -1; sl <= 1; sl += 2)
                s += double(sj * sk * sl) * at(x, j, sj * h, k, sk * h, l, sl * h);
          g.ddd[j][k][l] = s * (i2 * i2 * i2);
        }
      }
    }
    return g;
  }
};

}  // namespace

GaugeField GaugeField::identity() {
  auto impl = std::make_shared<IdentityGauge>();
  impl->name = "Identity";
  GaugeField g;
  g.impl_ = std::move(impl);
  return g;
}

GaugeField GaugeField::axial(const Vec3& axis, Phase phase) {
  const double n = norm3(axis);
  if (!(n > 0.0)) throw ContractViolation("GaugeField::axial: zero axis");
  auto impl = std::make_shared<AxialGauge>();
  impl->u = algebra::left_matrix(axis[0] / n, axis[1] / n, axis[2] / n);
  impl->phase = phase;
  impl->name = "Axial";
  GaugeField g;
  g.impl_ = std::move(impl);
  return g;
}

GaugeField GaugeField::product(GaugeField a, GaugeField b) {
  auto impl = std::make_shared<ProductGauge>();
  impl->name = "Product(" + a.name() + "," + b.name() + ")";
  impl->a = std::move(a);
  impl->b = std::move(b);
  GaugeField g;
  g.impl_ = std::move(impl);
  return g;
}

GaugeField GaugeField::from_function(std::function<Mat4(const Point4&)> f, std::string name, double h) {
  auto impl = std::make_shared<FunctionGauge>();
  impl->f = std::move(f);
  impl->h = h;
  impl->name = std::move(name);
  GaugeField g;
  g.impl_ = std::move(impl);
  return g;
}

Mat4 GaugeField::value(const Point4& x) const { return jet(x).v; }

GaugeJet GaugeField::jet(const Point4& x) const {
  GaugeJet g = impl_->jet(x);
  check_group(g.v);
  return g;
}

const std::string& GaugeField::name() const { return impl_->name; }

}  // namespace levylap::connection
