#include "levylap/selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "levylap/algebra.hpp"
#include "levylap/connection.hpp"
#include "levylap/errors.hpp"
#include "levylap/holonomy.hpp"
#include "levylap/levy.hpp"
#include "levylap/rng.hpp"
#include "levylap/simd.hpp"
#include "levylap/transport.hpp"

namespace levylap::selftest {

namespace {

using algebra::RotationCurve;
using connection::Connection;
using geometry::MetricChart;
using transport::Curve;

constexpr double kFourPiSq = 4.0 * M_PI * M_PI;

struct Measured {
  double value = 0.0;
  std::string detail;
};

class Suite {
 public:
  explicit Suite(const Options& o) : opt_(o) {}

  void upper(const char* module, const char* name, double tol, const std::function<Measured()>& f) {
    add(module, name, tol, false, f);
  }
  void lower(const char* module, const char* name, double tol, const std::function<Measured()>& f) {
    add(module, name, tol, true, f);
  }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  void add(const char* module, const char* name, double tol, bool lower, const std::function<Measured()>& f) {
    Check c;
    c.module = module;
    c.name = name;
    c.tolerance = tol;
    c.lower_bound = lower;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Measured m = f();
      c.value = m.value;
      c.detail = m.detail;
      c.passed = std::isfinite(m.value) && (lower ? m.value >= tol : m.value <= tol);
    } catch (const std::exception& e) {
      c.value = NAN;
      c.detail = std::string("exception: ") + e.what();
      c.passed = false;
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    checks_.push_back(std::move(c));
  }

  Options opt_;
  std::vector<Check> checks_;
};

Mat4 random_antisymmetric(Rng& rng) {
  Mat4 x;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      x(a, b) = rng.normal();
      x(b, a) = -x(a, b);
    }
  return x;
}

std::vector<MetricChart> charts() {
  return {MetricChart::flat(),
          MetricChart::conformally_flat(geometry::ScalarField::gaussian(0.3, {0.1, 0.0, -0.2, 0.0}, 0.8)),
          MetricChart::round_s4(1.0), MetricChart::s1xs3(1.0)};
}

std::vector<MetricChart> both_orientations(const std::vector<MetricChart>& cs) {
  std::vector<MetricChart> out;
  for (const auto& c : cs) {
    out.push_back(c);
    out.push_back(c.with_orientation(geometry::Orientation::Left));
  }
  return out;
}

Point4 sample_point(Rng& rng, double scale = 0.6) {
  return {scale * rng.normal(), scale * rng.normal(), scale * rng.normal(), scale * rng.normal()};
}

connection::GaugeField test_gauge() {
  connection::Phase p;
  p.amplitude = 0.7;
  p.wave = {0.3, -0.5, 0.2, 0.4};
  p.offset = 0.1;
  p.quadratic = 0.05;
  return connection::GaugeField::axial({0.0, 0.6, 0.8}, p);
}

Connection perturbed_instanton() {
  connection::Bump b;
  b.center = {0.2, 0.1, 0.0, 0.0};
  b.radius = 1.0;
  b.polarization = {1.0, 0.5, 0.0, -0.3};
  b.direction = {0.0, 0.0, 1.0};
  b.amplitude = 0.1;
  return Connection::perturbed(Connection::instanton(), b);
}

std::vector<std::pair<std::string, Connection>> connection_presets() {
  return {{"zero", Connection::zero()},
          {"instanton", Connection::instanton()},
          {"anti-instanton", Connection::instanton(1.0, {}, connection::Duality::SelfDual)},
          {"perturbed", perturbed_instanton()},
          {"gauge-transformed", connection::gauge_transform(Connection::instanton(0.8), test_gauge())}};
}

double worst_form(const connection::FormMat& f) {
  double w = 0.0;
  for (const auto& row : f)
    for (const auto& m : row) w = std::fmax(w, max_abs(m));
  return w;
}

double rel(double err, double scale) { return err / std::fmax(scale, 1e-300); }

std::string fmt(const char* label, double v) {
  std::ostringstream os;
  os.precision(3);
  os << label << "=" << std::scientific << v;
  return os.str();
}

}  // namespace

bool all_passed(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return !checks.empty();
}

std::vector<Check> run(const Options& opt) {
  Suite s(opt);
  const std::uint64_t seed = opt.seed;
  const int jobs = opt.jobs;

  // ---- geometry
  s.upper("geometry", "hodge star is an involution", 1e-12, [&] {
    Rng rng(seed);
    double worst = 0.0;
    for (const auto& c : both_orientations(charts()))
      for (int k = 0; k < 20; ++k) {
        const Point4 x = sample_point(rng);
        const geometry::TwoForm w{random_antisymmetric(rng)};
        const auto ww = geometry::hodge_star(c, x, geometry::hodge_star(c, x, w));
        worst = std::fmax(worst, rel(max_abs(ww.c - w.c), max_abs(w.c)));
        const geometry::Bivector b{random_antisymmetric(rng)};
        const auto bb = geometry::hodge_star(c, x, geometry::hodge_star(c, x, b));
        worst = std::fmax(worst, rel(max_abs(bb.c - b.c), max_abs(b.c)));
      }
    return Measured{worst, "relative, 4 presets x 2 orientations x 20 points"};
  });

  s.upper("geometry", "star is +1 on v_i^+ and -1 on v_i^-", 1e-12, [&] {
    Rng rng(seed + 1);
    double worst = 0.0;
    for (const auto& c : both_orientations(charts()))
      for (int k = 0; k < 10; ++k) {
        const Point4 x = sample_point(rng);
        const auto b = geometry::selfdual_basis(geometry::orthonormal_frame(c, x), c.metric(x), c.orientation());
        for (int i = 0; i < 3; ++i) {
          worst = std::fmax(worst, rel(max_abs(geometry::hodge_star(c, x, b.plus[i]).c - b.plus[i].c), max_abs(b.plus[i].c)));
          worst = std::fmax(worst, rel(max_abs(geometry::hodge_star(c, x, b.minus[i]).c + b.minus[i].c), max_abs(b.minus[i].c)));
        }
      }
    return Measured{worst, "relative"};
  });

  s.upper("geometry", "christoffel symbols: flat vanish, lower pair symmetric", 1e-14, [&] {
    Rng rng(seed + 2);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const auto g = geometry::christoffel(MetricChart::flat(), sample_point(rng));
      for (const auto& m : g) worst = std::fmax(worst, max_abs(m));
    }
    for (const auto& c : charts())
      for (int k = 0; k < 10; ++k) {
        const auto g = geometry::christoffel(c, sample_point(rng));
        double scale = 0.0;
        for (const auto& m : g) scale = std::fmax(scale, max_abs(m));
        for (const auto& m : g) worst = std::fmax(worst, rel(symmetry_defect(m), std::fmax(scale, 1.0)));
      }
    return Measured{worst, "absolute (flat), relative (symmetry)"};
  });

  s.upper("geometry", "analytic christoffels match central differences", 1e-6, [&] {
    Rng rng(seed + 3);
    double worst = 0.0;
    for (const auto& c : charts()) {
      if (c.preset() == MetricChart::Preset::Flat) continue;
      for (int k = 0; k < 10; ++k) {
        const Point4 x = sample_point(rng);
        const auto a = geometry::christoffel(c, x);
        const auto n = geometry::christoffel_numeric(c, x, 1e-4);
        double scale = 0.0, err = 0.0;
        for (int i = 0; i < 4; ++i) {
          scale = std::fmax(scale, max_abs(a[i]));
          err = std::fmax(err, max_abs(a[i] - n[i]));
        }
        worst = std::fmax(worst, rel(err, scale));
      }
    }
    return Measured{worst, "relative, h = 1e-4"};
  });

  // ---- algebra
  s.upper("algebra", "P_L, P_R: complementary orthogonal idempotents", 1e-14, [&] {
    Rng rng(seed + 4);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Mat4 x = random_antisymmetric(rng), y = random_antisymmetric(rng);
      const Mat4 l = algebra::project_left(x), r = algebra::project_right(x);
      const double sc = max_abs(x);
      worst = std::fmax(worst, rel(max_abs(l + r - x), sc));
      worst = std::fmax(worst, rel(max_abs(algebra::project_left(r)), sc));
      worst = std::fmax(worst, rel(max_abs(algebra::project_right(l)), sc));
      worst = std::fmax(worst, rel(max_abs(algebra::project_left(l) - l), sc));
      worst = std::fmax(worst, rel(max_abs(algebra::project_right(r) - r), sc));
      const double ip = algebra::trace_product(l, algebra::project_right(y));
      worst = std::fmax(worst, rel(std::fabs(ip), frobenius_norm(x) * frobenius_norm(y)));
    }
    return Measured{worst, "relative, 100 random pairs"};
  });

  s.upper("algebra", "[Lie(S^3_L), Lie(S^3_R)] = 0", 1e-14, [&] {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        worst = std::fmax(worst, frobenius_norm(commutator(algebra::left_basis(i), algebra::right_basis(j))));
    return Measured{worst, "all basis pairs"};
  });

  s.upper("algebra", "left rotation curves have no right part", 1e-10, [&] {
    const auto w = RotationCurve::trigonometric(
        algebra::left_matrix(0.4, -0.2, 0.7), {algebra::left_matrix(0.3, 0.1, 0.0), algebra::left_matrix(0.0, -0.5, 0.2)},
        {algebra::left_matrix(-0.6, 0.2, 0.3)});
    double worst = 0.0;
    for (int k = 0; k <= 512; ++k) {
      const double t = k / 512.0;
      worst = std::fmax(worst, frobenius_norm(algebra::project_right(w.log_derivative(t))));
      worst = std::fmax(worst, frobenius_norm(algebra::project_right(w.right_log_derivative(t))));
    }
    return Measured{worst, "body and spatial log-derivatives, 513 nodes"};
  });

  s.upper("algebra", "bivector_of maps Lie(S^3_L) to +1 and Lie(S^3_R) to -1 eigenvectors", 1e-14, [&] {
    const auto flat = MetricChart::flat();
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      const auto bl = algebra::bivector_of(algebra::left_basis(i));
      const auto br = algebra::bivector_of(algebra::right_basis(i));
      worst = std::fmax(worst, max_abs(geometry::hodge_star(flat, {}, bl).c - bl.c));
      worst = std::fmax(worst, max_abs(geometry::hodge_star(flat, {}, br).c + br.c));
    }
    return Measured{worst, "flat chart, reference orientation"};
  });

  // ---- connection
  s.upper("connection", "F_+ + F_- = F and <F_+, F_-> = 0", 1e-12, [&] {
    Rng rng(seed + 5);
    double worst = 0.0;
    const std::vector<MetricChart> cs = {MetricChart::flat(), MetricChart::round_s4(), MetricChart::s1xs3()};
    for (const auto& [name, a] : connection_presets())
      for (const auto& c : cs)
        for (int k = 0; k < 8; ++k) {
          const Point4 x = sample_point(rng, 0.5);
          const auto cv = connection::curvature(a, c, x);
          const double sc = worst_form(cv.f);
          if (sc == 0.0) continue;
          connection::FormMat sum{};
          for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) sum[m][n] = cv.plus[m][n] + cv.minus[m][n] - cv.f[m][n];
          worst = std::fmax(worst, rel(worst_form(sum), sc));
          const Mat4 gi = inverse(c.metric(x));
          worst = std::fmax(worst, rel(std::fabs(connection::form_inner(gi, cv.plus, cv.minus)),
                                       connection::form_norm2(gi, cv.f)));
        }
    return Measured{worst, "relative, 5 connections x 3 charts"};
  });

  s.upper("connection", "Bianchi identity with finite-difference derivatives", 1e-6, [&] {
    Rng rng(seed + 6);
    double worst = 0.0;
    const std::vector<Connection> as = {Connection::instanton(), perturbed_instanton(),
                                        connection::gauge_transform(Connection::instanton(), test_gauge())};
    const double h = 1e-3;
    for (const auto& a : as)
      for (int k = 0; k < 8; ++k) {
        const Point4 x = sample_point(rng, 0.5);
        const auto pot = a.potential(x);
        const auto f0 = connection::curvature_form(a.jet(x));
        // D_l F_mn = (4th-order central difference of F) + [A_l, F_mn]
        std::array<connection::FormMat, 4> df{};
        for (int l = 0; l < 4; ++l) {
          const double w[4] = {1.0, -8.0, 8.0, -1.0};
          const double off[4] = {-2.0, -1.0, 1.0, 2.0};
          for (int st = 0; st < 4; ++st) {
            Point4 y = x;
            y[l] += off[st] * h;
            const auto f = connection::curvature_form(a.jet(y));
            for (int m = 0; m < 4; ++m)
              for (int n = 0; n < 4; ++n) df[l][m][n] += (w[st] / (12.0 * h)) * f[m][n];
          }
          for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) df[l][m][n] += commutator(pot[l], f0[m][n]);
        }
        for (int l = 0; l < 4; ++l)
          for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n)
              worst = std::fmax(worst, max_abs(df[l][m][n] + df[m][n][l] + df[n][l][m]));
      }
    return Measured{worst, "cyclic sum of central differences of F, h = 1e-3, 3 presets x 8 points"};
  });

  // One quadrature pass per connection; shared by the next three checks.
  const auto region = connection::Region::ball({}, 50.0, 400, 6);
  const auto flat = MetricChart::flat();

  s.upper("connection", "S_YM >= 4 pi^2 |k| up to quadrature tolerance", 0.01 * kFourPiSq, [&] {
    double worst = -INFINITY;
    std::string detail;
    for (const auto& [name, a] : connection_presets()) {
      const auto r = connection::action_and_charge(a, flat, region, jobs);
      const double gap = kFourPiSq * std::fabs(r.charge.value) - r.action.value;
      worst = std::fmax(worst, gap);
      detail += name + ": S=" + std::to_string(r.action.value) + " k=" + std::to_string(r.charge.value) + "; ";
    }
    return Measured{worst, detail};
  });

  s.upper("connection", "action and charge are gauge invariant", 1e-8, [&] {
    const auto a = Connection::instanton(0.8);
    const auto b = connection::gauge_transform(a, test_gauge());
    const auto ra = connection::action_and_charge(a, flat, region, jobs);
    const auto rb = connection::action_and_charge(b, flat, region, jobs);
    const double d = std::fmax(rel(std::fabs(ra.action.value - rb.action.value), ra.action.value),
                               rel(std::fabs(ra.charge.value - rb.charge.value), std::fabs(ra.charge.value)));
    return Measured{d, "relative"};
  });

  s.upper("connection", "charge flips sign with the orientation", 1e-12, [&] {
    const auto a = Connection::instanton();
    const auto kr = connection::topological_charge(a, flat, region, jobs).value;
    const auto kl = connection::topological_charge(a, flat.with_orientation(geometry::Orientation::Left), region, jobs).value;
    return Measured{rel(std::fabs(kr + kl), std::fabs(kr)), fmt("k_right", kr) + " " + fmt("k_left", kl)};
  });

  // ---- transport
  std::vector<Curve> loops;
  {
    Rng rng(seed + 7);
    for (int i = 0; i < 5; ++i) loops.push_back(Curve::fourier_loop(rng.next_u64(), {0.2, -0.1, 0.1, 0.0}, 0.4));
  }

  s.upper("transport", "gauge covariance of U", 1e-8, [&] {
    const auto a = Connection::instanton();
    const auto psi = test_gauge();
    const auto b = connection::gauge_transform(a, psi);
    double worst = 0.0;
    for (const auto& g : loops) {
      const Curve open = Curve::hermite({0.0, 0.5, 1.0}, {g.position(0.0), g.position(0.3), g.position(0.6)});
      for (const Curve* c : {&g, &open}) {
        const Mat4 ua = transport::gauge_transport(a, *c).u_end();
        const Mat4 ub = transport::gauge_transport(b, *c).u_end();
        const Mat4 pred = psi.value(c->endpoint()).transposed() * ua * psi.value(c->basepoint());
        worst = std::fmax(worst, max_abs(ub - pred));
      }
    }
    return Measured{worst, "U' = psi(1)^-1 U psi(0), 10 curves"};
  });

  s.lower("transport", "RK4 step doubling gains a factor >= 8", 8.0, [&] {
    const auto a = Connection::instanton();
    const auto s4 = MetricChart::round_s4();
    double worst = INFINITY;
    for (const auto& g : loops) {
      transport::TransportOptions o;
      o.steps = 4096;
      const auto ref = transport::transport(a, s4, g, o);
      double e[2];
      double f[2];
      for (int i = 0; i < 2; ++i) {
        o.steps = 48 << i;
        o.min_segment_steps = 2;
        const auto p = transport::transport(a, s4, g, o);
        e[i] = max_abs(p.u_end() - ref.u_end());
        f[i] = max_abs(p.e.back() - ref.e.back());
      }
      worst = std::fmin(worst, std::fmin(e[0] / e[1], f[0] / f[1]));
    }
    return Measured{worst, "gauge and Levi-Civita transport on the round S^4, 48 -> 96 steps"};
  });

  s.upper("transport", "reversed loop transports to the inverse", 1e-8, [&] {
    const auto a = Connection::instanton();
    const auto s4 = MetricChart::round_s4();
    double worst = 0.0;
    for (const auto& g : loops) {
      const auto f = transport::transport(a, s4, g);
      const auto b = transport::transport(a, s4, transport::reversed(g));
      worst = std::fmax(worst, max_abs(b.u_end() * f.u_end() - Mat4::identity()));
      worst = std::fmax(worst, max_abs(b.levi_civita(b.size() - 1) * f.levi_civita(f.size() - 1) - Mat4::identity()));
    }
    return Measured{worst, "gauge and Levi-Civita"};
  });

  s.upper("transport", "transports stay orthogonal / isometric", 1e-10, [&] {
    const auto a = perturbed_instanton();
    double worst = 0.0;
    for (const auto& c : {MetricChart::round_s4(), MetricChart::s1xs3()})
      for (const auto& g : loops) {
        const auto p = transport::transport(a, c, g);
        for (std::size_t k = 0; k < p.size(); ++k) {
          worst = std::fmax(worst, orthogonality_defect(p.u[k]));
          worst = std::fmax(worst, max_abs(p.e[k].transposed() * p.g[k] * p.e[k] - Mat4::identity()));
        }
      }
    return Measured{worst, "U^T U - I and E^T g E - I at every node"};
  });

  s.upper("transport", "composition along concatenated curves", 1e-8, [&] {
    const auto a = perturbed_instanton();
    const auto c = MetricChart::round_s4();
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < loops.size(); ++i) {
      const auto& g = loops[i];
      const auto& h = loops[i + 1];
      const Curve eta = Curve::hermite({0.0, 1.0}, {g.endpoint(), h.position(0.5)});
      const auto pg = transport::transport(a, c, g);
      const auto ph = transport::transport(a, c, eta);
      const auto pc = transport::transport(a, c, transport::concatenate(g, eta));
      worst = std::fmax(worst, max_abs(pc.u_end() - ph.u_end() * pg.u_end()));
      const Mat4 q = ph.levi_civita(ph.size() - 1) * pg.levi_civita(pg.size() - 1);
      worst = std::fmax(worst, max_abs(pc.levi_civita(pc.size() - 1) - q));
    }
    return Measured{worst, "U(gamma eta) = U(eta) U(gamma)"};
  });

  s.upper("transport", "reparameterization invariance", 1e-8, [&] {
    const auto a = perturbed_instanton();
    const auto c = MetricChart::s1xs3();
    double worst = 0.0;
    for (const auto& g : loops) {
      const Curve gphi = Curve::from_function(
          [g](double t) {
            const double phi = t + 0.15 * std::sin(2.0 * M_PI * t) / (2.0 * M_PI);
            const double dphi = 1.0 + 0.15 * std::cos(2.0 * M_PI * t);
            const auto p = g.point(phi);
            return transport::CurvePoint{p.x, dphi * p.v};
          },
          {}, g.name() + "-reparameterized");
      const auto p0 = transport::transport(a, c, g);
      const auto p1 = transport::transport(a, c, gphi);
      worst = std::fmax(worst, max_abs(p0.u_end() - p1.u_end()));
      worst = std::fmax(worst, max_abs(p0.e.back() - p1.e.back()));
    }
    return Measured{worst, "t -> t + 0.15 sin(2 pi t) / 2 pi"};
  });

  // ---- levy
  const std::vector<RotationCurve> ws = {
      RotationCurve::constant(algebra::left_basis(0) + 0.5 * algebra::left_basis(2)),
      RotationCurve::trigonometric(algebra::left_matrix(0.3, 0.8, -0.2), {algebra::left_matrix(0.5, 0.0, 0.4)},
                                   {algebra::right_matrix(0.2, -0.3, 0.1)}),
      RotationCurve::product_exp(algebra::left_matrix(0.6, 0.0, 0.3), algebra::right_matrix(0.0, 0.9, -0.4))};

  s.upper("levy", "closed formula equals the modified Levy trace of the kernels", 1e-6, [&] {
    double worst = 0.0;
    const std::vector<Connection> as = {Connection::instanton(), perturbed_instanton(),
                                        connection::gauge_transform(Connection::instanton(), test_gauge())};
    for (const auto& a : as)
      for (const auto& c : {MetricChart::flat(), MetricChart::round_s4()})
        for (std::size_t i = 0; i < 2; ++i) {
          const auto tk = levy::transport_kernels(a, c, loops[i]);
          for (const auto& w : ws)
            worst = std::fmax(worst, levy::modified_levy_laplacian_transport(tk, w).route_discrepancy);
        }
    return Measured{worst, "3 connections x 2 charts x 2 loops x 3 W"};
  });

  s.upper("levy", "left W and anti-self-dual A: rotation term vanishes", 1e-6, [&] {
    double worst = 0.0, minus = 0.0;
    for (const auto& c : {MetricChart::flat(), MetricChart::round_s4()})
      for (const auto& g : loops) {
        const auto r = levy::modified_levy_laplacian_transport(Connection::instanton(), c, g, ws[0]);
        worst = std::fmax(worst, frobenius_norm(r.term_rot));
        minus = std::fmax(minus, frobenius_norm(r.term_rot_minus));
      }
    return Measured{std::fmax(worst, minus), fmt("max|term_rot|", worst) + " " + fmt("max|term_rot_minus|", minus)};
  });

  s.upper("levy", "W = I: Yang-Mills connections give zero", 1e-6, [&] {
    double worst = 0.0;
    const auto id = RotationCurve::identity();
    const std::vector<Connection> as = {Connection::instanton(),
                                        connection::gauge_transform(Connection::instanton(), test_gauge())};
    for (const auto& a : as)
      for (const auto& c : {MetricChart::flat(), MetricChart::round_s4()})
        for (const auto& g : loops) worst = std::fmax(worst, levy::modified_levy_laplacian_transport(a, c, g, id).norm());
    return Measured{worst, "instanton and gauge-transformed instanton"};
  });

  s.upper("levy", "tr(R K^S) equals the bivector pairings", 1e-8, [&] {
    double worst = 0.0;
    for (const auto& c : {MetricChart::flat(), MetricChart::s1xs3()})
      for (const auto& g : loops)
        for (const auto& w : ws)
          worst = std::fmax(worst, levy::modified_levy_laplacian_transport(perturbed_instanton(), c, g, w).split_discrepancy);
    return Measured{worst, "integrated, perturbed instanton"};
  });

  // ---- holonomy
  s.upper("holonomy", "loop holonomy on Lambda^2 is block diagonal", 1e-8, [&] {
    double worst = 0.0;
    const auto family = holonomy::loop_family(seed + 8, 10, {0.1, 0.0, 0.0, 0.0}, 0.3);
    for (const auto& c : {MetricChart::round_s4(), MetricChart::s1xs3(), charts()[1]})
      for (const auto& g : family) {
        const auto k = holonomy::loop_holonomy_bivectors(c, g);
        for (int i = 0; i < 3; ++i)
          for (int j = 3; j < 6; ++j) worst = std::fmax(worst, std::fmax(std::fabs(k[i][j]), std::fabs(k[j][i])));
      }
    return Measured{worst, "max cross-block entry"};
  });

  s.upper("holonomy", "self-dual holonomies are rotations", 1e-8, [&] {
    double worst = 0.0;
    const auto family = holonomy::loop_family(seed + 9, 10, {0.1, 0.0, 0.0, 0.0}, 0.3);
    for (const auto& c : {MetricChart::round_s4(), MetricChart::s1xs3()})
      for (const auto& g : family) {
        const auto k = holonomy::loop_holonomy_2forms(c, g);
        worst = std::fmax(worst, std::fmax(holonomy::orthogonality_defect(k), std::fabs(holonomy::determinant(k) - 1.0)));
      }
    return Measured{worst, "orthogonality and det - 1"};
  });

  s.upper("holonomy", "classification stable under reparameterization and step doubling", 0.0, [&] {
    int mismatches = 0;
    std::string detail;
    const auto family = holonomy::loop_family(seed + 10, 50, {0.0, 0.0, 0.0, 0.0}, 0.3);
    std::vector<Curve> reparam;
    for (const auto& g : family)
      reparam.push_back(Curve::from_function(
          [g](double t) {
            const auto p = g.point(t * t * (3.0 - 2.0 * t));
            return transport::CurvePoint{p.x, 6.0 * t * (1.0 - t) * p.v};
          },
          {}, g.name()));
    transport::TransportOptions fine;
    fine.steps = 4000;
    for (const auto& c : {MetricChart::flat(), MetricChart::round_s4(), MetricChart::s1xs3()}) {
      const auto a = holonomy::classify_holonomy(c, family, {}, jobs);
      const auto b = holonomy::classify_holonomy(c, reparam, {}, jobs);
      const auto d = holonomy::classify_holonomy(c, family, fine, jobs);
      if (a.cls != b.cls || a.cls != d.cls) ++mismatches;
      detail += c.name() + "=" + holonomy::to_string(a.cls) + " ";
    }
    return Measured{double(mismatches), detail};
  });

  s.upper("holonomy", "SO(3) orbit of any nonzero w spans 3 dimensions", 0.0, [&] {
    holonomy::HolonomyClassification so3;
    so3.cls = holonomy::HolonomyClass::SO3;
    so3.algebra_dimension = 3;
    Rng rng(seed + 11);
    int bad = 0;
    for (int i = 0; i < 100; ++i)
      if (holonomy::orbit_span_report(so3, rng.unit_vec3(), seed + i) != 3) ++bad;
    return Measured{double(bad), "100 random unit w"};
  });

  // ---- simd
  s.upper("simd", "vector kernels are bitwise identical to the scalar reference", 0.0, [&] {
    Rng rng(seed + 12);
    const auto& ref = simd::scalar_table();
    int mismatches = 0;
    std::string names;
    std::vector<double> a(16), b(16), blocks(16 * 37), w(37), x(101), y(101);
    for (auto* v : {&a, &b, &blocks, &w, &x, &y})
      for (double& e : *v) e = rng.normal();
    for (simd::Isa isa : simd::available_isas()) {
      const auto& t = simd::table(isa);
      names += std::string(t.name) + " ";
      double c0[16], c1[16];
      ref.mat4_mul(a.data(), b.data(), c0);
      t.mat4_mul(a.data(), b.data(), c1);
      for (int i = 0; i < 16; ++i) mismatches += c0[i] != c1[i];
      ref.weighted_sum16(blocks.data(), w.data(), w.size(), c0);
      t.weighted_sum16(blocks.data(), w.data(), w.size(), c1);
      for (int i = 0; i < 16; ++i) mismatches += c0[i] != c1[i];
      auto y0 = y, y1 = y;
      ref.axpy(0.37, x.data(), y0.data(), x.size());
      t.axpy(0.37, x.data(), y1.data(), x.size());
      for (std::size_t i = 0; i < y.size(); ++i) mismatches += y0[i] != y1[i];
      mismatches += ref.dot(x.data(), y.data(), x.size()) != t.dot(x.data(), y.data(), x.size());
    }
    return Measured{double(mismatches), names};
  });

  return s.take();
}

}  // namespace levylap::selftest
