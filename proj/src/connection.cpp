#include "levylap/connection.hpp"

#include <cmath>
#include <sstream>

#include "detail/quaternion.hpp"
#include "levylap/algebra.hpp"
#include "levylap/errors.hpp"
#include "levylap/parallel.hpp"
#include "levylap/quadrature.hpp"

namespace levylap::connection {

MatJet operator+(const MatJet& a, const MatJet& b) {
  MatJet c;
  c.v = a.v + b.v;
  for (int l = 0; l < 4; ++l) {
    c.d[l] = a.d[l] + b.d[l];
    for (int k = 0; k < 4; ++k) c.dd[k][l] = a.dd[k][l] + b.dd[k][l];
  }
  return c;
}

MatJet operator*(const MatJet& a, const MatJet& b) {
  MatJet c;
  c.v = a.v * b.v;
  for (int l = 0; l < 4; ++l) c.d[l] = a.d[l] * b.v + a.v * b.d[l];
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      c.dd[k][l] = a.dd[k][l] * b.v + a.d[k] * b.d[l] + a.d[l] * b.d[k] + a.v * b.dd[k][l];
    }
  }
  return c;
}

MatJet transpose(const MatJet& a) {
  MatJet t;
  t.v = a.v.transposed();
  for (int l = 0; l < 4; ++l) {
    t.d[l] = a.d[l].transposed();
    for (int k = 0; k < 4; ++k) t.dd[k][l] = a.dd[k][l].transposed();
  }
  return t;
}

const char* to_string(Duality d) {
  return d == Duality::AntiSelfDual ? "anti-self-dual" : "self-dual";
}

// --- connection presets --------------------------------------------------------

struct Connection::Impl {
  virtual ~Impl() = default;
  virtual std::array<Mat4, 4> potential(const Point4& x) const = 0;
  virtual ConnectionJet jet(const Point4& x) const = 0;
  virtual std::string name() const = 0;
};

namespace {

void check_point(const Point4& x) {
  for (double c : x) {
    if (!std::isfinite(c)) throw DomainError("connection: non-finite point");
  }
}

struct ZeroImpl final : Connection::Impl {
  std::array<Mat4, 4> potential(const Point4&) const override { return {}; }
  ConnectionJet jet(const Point4&) const override { return {}; }
  std::string name() const override { return "Zero"; }
};

struct ConstantImpl final : Connection::Impl {
  std::array<Mat4, 4> a;
  std::array<Mat4, 4> potential(const Point4&) const override { return a; }
  ConnectionJet jet(const Point4&) const override {
    ConnectionJet j{};
    for (int m = 0; m < 4; ++m) j[m].v = a[m];
    return j;
  }
  std::string name() const override { return "Constant"; }
};

struct InstantonImpl final : Connection::Impl {
  double rho = 1.0;
  Point4 center{};
  Duality duality = Duality::AntiSelfDual;
  std::array<std::array<Mat4, 4>, 4> c{};  // c[n][m]

  InstantonImpl(double r, const Point4& ctr, Duality d) : rho(r), center(ctr), duality(d) {
    using detail::Quat;
    for (int n = 0; n < 4; ++n) {
      for (int m = 0; m < 4; ++m) {
        const Quat en = Quat::unit(n), em = Quat::unit(m);
        c[n][m] = detail::left_imag(d == Duality::AntiSelfDual ? en.conj() * em : en * em.conj());
      }
    }
  }

  std::array<Mat4, 4> b_of(const Vec4& q) const {
    std::array<Mat4, 4> b{};
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) b[m] += q[n] * c[n][m];
    return b;
  }

  std::array<Mat4, 4> potential(const Point4& x) const override {
    check_point(x);
    const Vec4 q = (1.0 / rho) * (x - center);
    const double nn = 1.0 + dot(q, q);
    auto b = b_of(q);
    for (auto& m : b) m *= 1.0 / (rho * nn);
    return b;
  }

  ConnectionJet jet(const Point4& x) const override {
    check_point(x);
    const Vec4 q = (1.0 / rho) * (x - center);
    const double nn = 1.0 + dot(q, q);
    const auto b = b_of(q);
    const double r2 = 1.0 / (rho * rho), r3 = r2 / rho;
    const double n1 = 1.0 / nn, n2 = n1 * n1, n3 = n2 * n1;
    ConnectionJet j{};
    for (int m = 0; m < 4; ++m) {
      j[m].v = b[m] * (n1 / rho);
      for (int l = 0; l < 4; ++l) {
        j[m].d[l] = r2 * (n1 * c[l][m] - (2.0 * q[l] * n2) * b[m]);
        for (int k = 0; k < 4; ++k) {
          Mat4 t = (-2.0 * q[k] * n2) * c[l][m] - (2.0 * q[l] * n2) * c[k][m];
          double bc = 8.0 * q[l] * q[k] * n3;
          if (k == l) bc -= 2.0 * n2;
          t += bc * b[m];
          j[m].dd[k][l] = r3 * t;
        }
      }
    }
    return j;
  }

  std::string name() const override {
    std::ostringstream os;
    os << "Instanton(rho=" << rho << "," << to_string(duality) << ")";
    return os.str();
  }
};

struct PerturbedImpl final : Connection::Impl {
  std::shared_ptr<const Connection::Impl> base;
  Bump bump;
  Mat4 g;  // amplitude * left_matrix(direction)

  // b, grad b, Hessian b
  void bump_jet(const Point4& x, double& b, Vec4& db, Mat4& hb) const {
    const Vec4 y = x - bump.center;
    const double r2 = bump.radius * bump.radius;
    const double s = dot(y, y) / r2;
    b = 0.0;
    db = {};
    hb = {};
    if (s >= 1.0) return;
    const double u = 1.0 - s;
    b = std::exp(1.0 - 1.0 / u);
    const double bs = -b / (u * u);
    const double bss = b / (u * u * u * u) - 2.0 * b / (u * u * u);
    const Vec4 ds = (2.0 / r2) * y;
    db = bs * ds;
    hb = bss * Mat4::outer(ds, ds) + (2.0 * bs / r2) * Mat4::identity();
  }

  std::array<Mat4, 4> potential(const Point4& x) const override {
    auto a = base->potential(x);
    double b;
    Vec4 db;
    Mat4 hb;
    bump_jet(x, b, db, hb);
    if (b == 0.0) return a;
    const Vec4 y = x - bump.center;
    for (int m = 0; m < 4; ++m) {
      double p = bump.polarization[m];
      for (int n = 0; n < 4; ++n) p += 0.5 * bump.field(n, m) * y[n];
      a[m] += (b * p) * g;
    }
    return a;
  }

  ConnectionJet jet(const Point4& x) const override {
    ConnectionJet j = base->jet(x);
    double b;
    Vec4 db;
    Mat4 hb;
    bump_jet(x, b, db, hb);
    if (b == 0.0) return j;
    const Vec4 y = x - bump.center;
    const Mat4& f = bump.field;
    for (int m = 0; m < 4; ++m) {
      double p = bump.polarization[m];
      for (int n = 0; n < 4; ++n) p += 0.5 * f(n, m) * y[n];
      j[m].v += (b * p) * g;
      for (int l = 0; l < 4; ++l) {
        j[m].d[l] += (db[l] * p + 0.5 * b * f(l, m)) * g;
        for (int k = 0; k < 4; ++k)
          j[m].dd[k][l] += (hb(k, l) * p + 0.5 * (db[k] * f(l, m) + db[l] * f(k, m))) * g;
      }
    }
    return j;
  }

  std::string name() const override {
    std::ostringstream os;
    os << "Perturbed(" << base->name() << ",amp=" << bump.amplitude << ")";
    return os.str();
  }
};

struct GaugeImpl final : Connection::Impl {
  std::shared_ptr<const Connection::Impl> base;
  GaugeField psi;

  static MatJet jet_of(const GaugeJet& g) {
    MatJet m;
    m.v = g.v;
    m.d = g.d;
    m.dd = g.dd;
    return m;
  }

  std::array<Mat4, 4> potential(const Point4& x) const override {
    const GaugeJet g = psi.jet(x);
    auto a = base->potential(x);
    const Mat4 pt = g.v.transposed();
    for (int m = 0; m < 4; ++m) a[m] = pt * a[m] * g.v + pt * g.d[m];
    return a;
  }

  ConnectionJet jet(const Point4& x) const override {
    const GaugeJet g = psi.jet(x);
    const MatJet p = jet_of(g);
    const MatJet pt = transpose(p);
    const ConnectionJet a = base->jet(x);
    ConnectionJet out;
    for (int m = 0; m < 4; ++m) {
      MatJet dpsi;
      dpsi.v = g.d[m];
      for (int l = 0; l < 4; ++l) {
        dpsi.d[l] = g.dd[l][m];
        for (int k = 0; k < 4; ++k) dpsi.dd[k][l] = g.ddd[k][l][m];
      }
      out[m] = pt * a[m] * p + pt * dpsi;
    }
    return out;
  }

  std::string name() const override { return "GaugeTransformed(" + base->name() + "," + psi.name() + ")"; }
};

struct NumericImpl final : Connection::Impl {
  Connection base;
  double h;
  NumericImpl(Connection b, double step) : base(std::move(b)), h(step) {}
  std::array<Mat4, 4> potential(const Point4& x) const override { return base.potential(x); }
  ConnectionJet jet(const Point4& x) const override {
    return numeric_jet(base, x, h, std::sqrt(h) * 0.1);
  }
  std::string name() const override { return "Numeric(" + base.name() + ")"; }
};

}  // namespace

Connection Connection::zero() {
  Connection c;
  c.impl_ = std::make_shared<ZeroImpl>();
  return c;
}

Connection Connection::instanton(double rho, const Point4& center, Duality duality) {
  if (!(rho > 0.0)) throw ContractViolation("instanton: rho must be positive");
  Connection c;
  c.impl_ = std::make_shared<InstantonImpl>(rho, center, duality);
  return c;
}

Connection Connection::constant(const std::array<Mat4, 4>& a) {
  for (const Mat4& m : a) {
    algebra::require_antisymmetric(m, "Connection::constant");
    if (frobenius_norm(algebra::project_right(m)) > 1e-12 * std::fmax(1.0, frobenius_norm(m))) {
      throw ContractViolation("Connection::constant: value outside Lie(S^3_L)");
    }
  }
  auto impl = std::make_shared<ConstantImpl>();
  impl->a = a;
  Connection c;
  c.impl_ = std::move(impl);
  return c;
}

Connection Connection::perturbed(Connection base, Bump bump) {
  if (!(bump.radius > 0.0)) throw ContractViolation("perturbed: bump radius must be positive");
  if (antisymmetry_defect(bump.field) > 1e-12) throw ContractViolation("perturbed: bump field must be antisymmetric");
  auto impl = std::make_shared<PerturbedImpl>();
  impl->base = base.impl_;
  impl->bump = bump;
  impl->g = bump.amplitude * algebra::left_matrix(bump.direction[0], bump.direction[1], bump.direction[2]);
  Connection c;
  c.impl_ = std::move(impl);
  return c;
}

Connection Connection::gauge_transformed(Connection base, GaugeField psi) {
  auto impl = std::make_shared<GaugeImpl>();
  impl->base = base.impl_;
  impl->psi = std::move(psi);
  Connection c;
  c.impl_ = std::move(impl);
  return c;
}

Connection Connection::numeric(Connection base, double h) {
  Connection c;
  c.impl_ = std::make_shared<NumericImpl>(std::move(base), h);
  return c;
}

std::array<Mat4, 4> Connection::potential(const Point4& x) const { return impl_->potential(x); }
ConnectionJet Connection::jet(const Point4& x) const { return impl_->jet(x); }
std::string Connection::name() const { return impl_->name(); }

Connection gauge_transform(const Connection& a, const GaugeField& psi) {
  return Connection::gauge_transformed(a, psi);
}

ConnectionJet numeric_jet(const Connection& a, const Point4& x, double h1, double h2) {
  // 4th-order stencil of an arbitrary Point4 -> array<Mat4,4> map along one axis.
  auto diff = [](const auto& f, const Point4& p, int axis, double h) {
    std::array<Mat4, 4> out{};
    const double w[4] = {1.0, -8.0, 8.0, -1.0};
    const double off[4] = {-2.0, -1.0, 1.0, 2.0};
    for (int s = 0; s < 4; ++s) {
      Point4 y = p;
      y[axis] += off[s] * h;
      const auto v = f(y);
      for (int m = 0; m < 4; ++m) out[m] += (w[s] / (12.0 * h)) * v[m];
    }
    return out;
  };
  auto pot = [&](const Point4& y) { return a.potential(y); };
  ConnectionJet j{};
  const auto v = a.potential(x);
  for (int m = 0; m < 4; ++m) j[m].v = v[m];
  for (int l = 0; l < 4; ++l) {
    const auto d = diff(pot, x, l, h1);
    for (int m = 0; m < 4; ++m) j[m].d[l] = d[m];
  }
  for (int l = 0; l < 4; ++l) {
    auto dl = [&](const Point4& y) { return diff(pot, y, l, h2); };
    for (int k = l; k < 4; ++k) {
      const auto dd = diff(dl, x, k, h2);
      for (int m = 0; m < 4; ++m) {
        j[m].dd[k][l] = dd[m];
        j[m].dd[l][k] = dd[m];
      }
    }
  }
  return j;
}

// --- curvature -------------------------------------------------------------------

FormMat curvature_form(const ConnectionJet& j) {
  FormMat f{};
  for (int m = 0; m < 4; ++m) {
    for (int n = m + 1; n < 4; ++n) {
      f[m][n] = j[n].d[m] - j[m].d[n] + commutator(j[m].v, j[n].v);
      f[n][m] = -f[m][n];
    }
  }
  return f;
}

CurvatureJet curvature_jet(const ConnectionJet& j) {
  CurvatureJet cj;
  for (int m = 0; m < 4; ++m) cj.a[m] = j[m].v;
  cj.f = curvature_form(j);
  for (int l = 0; l < 4; ++l) {
    for (int m = 0; m < 4; ++m) {
      for (int n = m + 1; n < 4; ++n) {
        cj.df[l][m][n] = j[n].dd[l][m] - j[m].dd[l][n] + commutator(j[m].d[l], j[n].v) +
                         commutator(j[m].v, j[n].d[l]);
        cj.df[l][n][m] = -cj.df[l][m][n];
      }
    }
  }
  return cj;
}

namespace {

// f^{ab} = g^{am} g^{bn} f_mn
FormMat raise_form(const Mat4& gi, const FormMat& f) {
  FormMat t{}, out{};
  for (int a = 0; a < 4; ++a)
    for (int n = 0; n < 4; ++n)
      for (int m = 0; m < 4; ++m)
        if (gi(a, m) != 0.0) t[a][n] += gi(a, m) * f[m][n];
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int n = 0; n < 4; ++n)
        if (gi(b, n) != 0.0) out[a][b] += gi(b, n) * t[a][n];
  return out;
}

// (star f)_mn = 1/2 scale eps_abmn f^ab, f already raised.
FormMat star_raised(const FormMat& up, double scale) {
  FormMat out{};
  for (int m = 0; m < 4; ++m) {
    for (int n = m + 1; n < 4; ++n) {
      Mat4 s;
      for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
          const int e = geometry::levi_civita_symbol(a, b, m, n);
          if (e != 0) s += double(e) * up[a][b];
        }
      }
      out[m][n] = scale * s;
      out[n][m] = -out[m][n];
    }
  }
  return out;
}

}  // namespace

FormMat hodge_star(const MetricChart& chart, const Point4& x, const FormMat& f) {
  const Mat4 g = chart.metric(x);
  const Mat4 gi = inverse(g);
  return star_raised(raise_form(gi, f), chart.orientation_sign() * std::sqrt(determinant(g)));
}

FormMat hodge_star_orthonormal(const FormMat& f, double orientation_sign) {
  return star_raised(f, orientation_sign);
}

CurvatureSample curvature(const Connection& a, const MetricChart& chart, const Point4& x) {
  chart.check_domain(x);
  CurvatureSample s;
  s.x = x;
  s.f = curvature_form(a.jet(x));
  const FormMat st = hodge_star(chart, x, s.f);
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      for (double v : s.f[m][n].v) {
        if (!std::isfinite(v)) throw NumericError("curvature: non-finite value");
      }
      s.plus[m][n] = 0.5 * (s.f[m][n] + st[m][n]);
      s.minus[m][n] = 0.5 * (s.f[m][n] - st[m][n]);
    }
  }
  return s;
}

double lie_inner(const Mat4& a, const Mat4& b) { return -0.5 * frobenius_dot(a, b.transposed()); }

double form_inner(const Mat4& gi, const FormMat& a, const FormMat& b) {
  const FormMat up = raise_form(gi, b);
  double s = 0.0;
  for (int m = 0; m < 4; ++m)
    for (int n = m + 1; n < 4; ++n) s += lie_inner(a[m][n], up[m][n]);
  return s;
}

double form_norm2(const Mat4& gi, const FormMat& f) { return form_inner(gi, f, f); }

std::array<FormMat, 4> covariant_derivative(const CurvatureJet& cj, const geometry::Christoffel& gamma) {
  std::array<FormMat, 4> out{};
  for (int l = 0; l < 4; ++l) {
    for (int m = 0; m < 4; ++m) {
      for (int n = m + 1; n < 4; ++n) {
        Mat4 v = cj.df[l][m][n] + commutator(cj.a[l], cj.f[m][n]);
        for (int k = 0; k < 4; ++k) {
          if (gamma[k](l, m) != 0.0) v -= gamma[k](l, m) * cj.f[k][n];
          if (gamma[k](l, n) != 0.0) v -= gamma[k](l, n) * cj.f[m][k];
        }
        out[l][m][n] = v;
        out[l][n][m] = -v;
      }
    }
  }
  return out;
}

std::array<Mat4, 4> codifferential(const CurvatureJet& cj, const Mat4& gi,
                                   const geometry::Christoffel& gamma) {
  const auto nabla = covariant_derivative(cj, gamma);
  std::array<Mat4, 4> out{};
  for (int n = 0; n < 4; ++n) {
    for (int m = 0; m < 4; ++m) {
      for (int l = 0; l < 4; ++l) {
        if (gi(m, l) != 0.0) out[n] -= gi(m, l) * nabla[l][m][n];
      }
    }
  }
  return out;
}

std::array<Mat4, 4> codifferential(const Connection& a, const MetricChart& chart, const Point4& x) {
  const CurvatureJet cj = curvature_jet(a.jet(x));
  const auto out = codifferential(cj, inverse(chart.metric(x)), geometry::christoffel(chart, x));
  for (const Mat4& m : out) {
    for (double v : m.v) {
      if (!std::isfinite(v)) throw NumericError("codifferential: non-finite value");
    }
  }
  return out;
}

double bianchi_defect(const Connection& a, const Point4& x) {
  const CurvatureJet cj = curvature_jet(a.jet(x));
  const std::array<FormMat, 4> d = covariant_derivative(cj, geometry::Christoffel{});
  double worst = 0.0;
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) worst = std::fmax(worst, max_abs(d[l][m][n] + d[m][n][l] + d[n][l][m]));
  return worst;
}

// --- integrals --------------------------------------------------------------------

Region Region::ball(const Point4& center, double radius, int radial, int angular) {
  Region r;
  r.kind = Kind::Ball;
  r.center = center;
  r.radius = radius;
  r.radial = radial;
  r.angular = angular;
  return r;
}

Region Region::box(const Point4& lo, const Point4& hi, int intervals) {
  Region r;
  r.kind = Kind::Box;
  r.lo = lo;
  r.hi = hi;
  r.box_intervals = intervals;
  return r;
}

namespace {

double simpson_weight(int k, int n) {
  if (k == 0 || k == n) return 1.0;
  return k % 2 ? 4.0 : 2.0;
}

struct Density {
  double action = 0.0;  // 1/2 |F|^2 sqrt(g)
  double charge = 0.0;  // <F, *F> sqrt(g) / (8 pi^2)
};

Density density(const Connection& a, const MetricChart& chart, const Point4& x) {
  const Mat4 g = chart.metric(x);
  const Mat4 gi = inverse(g);
  const double sqrt_g = std::sqrt(determinant(g));
  const FormMat f = curvature_form(a.jet(x));
  const FormMat st = star_raised(raise_form(gi, f), chart.orientation_sign() * sqrt_g);
  Density d;
  d.action = 0.5 * form_norm2(gi, f) * sqrt_g;
  d.charge = form_inner(gi, f, st) * sqrt_g / (8.0 * M_PI * M_PI);
  if (!std::isfinite(d.action) || !std::isfinite(d.charge)) {
    throw NumericError("integrand is not finite");
  }
  return d;
}

ActionCharge integrate_ball(const Connection& a, const MetricChart& chart, const Region& reg, int jobs) {
  const int nr = reg.radial, na = reg.angular, nphi = 2 * reg.angular;
  if (nr < 2 || nr % 2 || na < 2 || na % 2) {
    throw ContractViolation("ball region: radial and angular intervals must be even and >= 2");
  }
  const double hr = reg.radius / nr, ha = M_PI / na, hphi = 2.0 * M_PI / nphi;
  struct Shell {
    Density sum;
    Density peak;
  };
  std::vector<Shell> shells(nr + 1);
  parallel_for(std::size_t(nr + 1), jobs, [&](std::size_t i) {
    const double r = hr * double(i);
    Shell sh;
    if (i == 0) {
      shells[i] = sh;  // r^3 Jacobian vanishes
      return;
    }
    for (int ic = 1; ic < na; ++ic) {
      const double chi = ha * ic;
      for (int it = 1; it < na; ++it) {
        const double th = ha * it;
        const double wang = simpson_weight(ic, na) * simpson_weight(it, na) * std::sin(chi) *
                            std::sin(chi) * std::sin(th) * (ha / 3.0) * (ha / 3.0) * hphi;
        for (int ip = 0; ip < nphi; ++ip) {
          const double ph = hphi * ip;
          const Point4 n{std::cos(chi), std::sin(chi) * std::cos(th),
                         std::sin(chi) * std::sin(th) * std::cos(ph),
                         std::sin(chi) * std::sin(th) * std::sin(ph)};
          const Density d = density(a, chart, reg.center + r * n);
          sh.sum.action += wang * d.action;
          sh.sum.charge += wang * d.charge;
          sh.peak.action = std::fmax(sh.peak.action, std::fabs(d.action));
          sh.peak.charge = std::fmax(sh.peak.charge, std::fabs(d.charge));
        }
      }
    }
    shells[i] = sh;
  });
  ActionCharge out;
  std::vector<double> sa(nr + 1), sc(nr + 1);
  for (int i = 0; i <= nr; ++i) {
    const double r = hr * i;
    const double w = simpson_weight(i, nr) * hr / 3.0 * r * r * r;
    sa[i] = w * shells[i].sum.action;
    sc[i] = w * shells[i].sum.charge;
  }
  out.action.value = pairwise_sum(sa);
  out.charge.value = pairwise_sum(sc);
  // Densities decaying like r^-8 beyond R integrate to at most (pi^2/2) D(R) R^4.
  const double r4 = std::pow(reg.radius, 4);
  out.action.tail_bound = 0.5 * M_PI * M_PI * shells[nr].peak.action * r4;
  out.charge.tail_bound = 0.5 * M_PI * M_PI * shells[nr].peak.charge * r4;
  out.action.samples = out.charge.samples = std::size_t(nr) * (na - 1) * (na - 1) * nphi;
  return out;
}

ActionCharge integrate_box(const Connection& a, const MetricChart& chart, const Region& reg, int jobs) {
  const int n = reg.box_intervals;
  if (n < 2 || n % 2) throw ContractViolation("box region: intervals must be even and >= 2");
  Vec4 h;
  for (int i = 0; i < 4; ++i) h[i] = (reg.hi[i] - reg.lo[i]) / n;
  std::vector<Density> slabs(n + 1);
  parallel_for(std::size_t(n + 1), jobs, [&](std::size_t i0) {
    Density s;
    for (int i1 = 0; i1 <= n; ++i1)
      for (int i2 = 0; i2 <= n; ++i2)
        for (int i3 = 0; i3 <= n; ++i3) {
          const Point4 x{reg.lo[0] + h[0] * double(i0), reg.lo[1] + h[1] * i1, reg.lo[2] + h[2] * i2,
                         reg.lo[3] + h[3] * i3};
          const double w = simpson_weight(i1, n) * simpson_weight(i2, n) * simpson_weight(i3, n);
          const Density d = density(a, chart, x);
          s.action += w * d.action;
          s.charge += w * d.charge;
        }
    slabs[i0] = s;
  });
  const double scale = h[0] * h[1] * h[2] * h[3] / 81.0;
  std::vector<double> sa(n + 1), sc(n + 1);
  for (int i = 0; i <= n; ++i) {
    sa[i] = simpson_weight(i, n) * scale * slabs[i].action;
    sc[i] = simpson_weight(i, n) * scale * slabs[i].charge;
  }
  ActionCharge out;
  out.action.value = pairwise_sum(sa);
  out.charge.value = pairwise_sum(sc);
  out.action.samples = out.charge.samples = std::size_t(n + 1) * (n + 1) * (n + 1) * (n + 1);
  return out;
}

}  // namespace

ActionCharge action_and_charge(const Connection& a, const MetricChart& chart, const Region& region,
                               int jobs) {
  return region.kind == Region::Kind::Ball ? integrate_ball(a, chart, region, jobs)
                                           : integrate_box(a, chart, region, jobs);
}

IntegralResult ym_action(const Connection& a, const MetricChart& chart, const Region& region, int jobs) {
  return action_and_charge(a, chart, region, jobs).action;
}

IntegralResult topological_charge(const Connection& a, const MetricChart& chart, const Region& region,
                                  int jobs) {
  return action_and_charge(a, chart, region, jobs).charge;
}

}  // namespace levylap::connection
