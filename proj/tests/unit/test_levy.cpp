#include <cmath>

#include "doctest.h"
#include "levylap/errors.hpp"
#include "levylap/levy.hpp"
#include "oracles.hpp"

using namespace levylap;
using namespace levylap::levy;
using algebra::RotationCurve;
using connection::Connection;
using geometry::MetricChart;
using transport::Curve;

namespace {

KernelTriple<double> constant_triple(const Block<double>& l, const Block<double>& s, int steps = 10) {
  KernelTriple<double> q;
  q.grid = TimeGrid::uniform(steps);
  q.levy.assign(q.grid.size(), l);
  q.singular.assign(q.grid.size(), s);
  return q;
}

Block<double> diag_block(double d) {
  Block<double> b{};
  for (int i = 0; i < 4; ++i) b[5 * i] = d;
  return b;
}

Block<double> skew_block() {
  Block<double> b{};
  b[1] = 2.0;
  b[4] = -2.0;
  b[11] = -0.5;
  b[14] = 0.5;
  return b;
}

Connection field_bump() {
  connection::Bump b;
  b.radius = 3.0;
  b.amplitude = 0.1;
  b.polarization = {0, 0, 0, 0};
  b.field = Mat4::wedge(0, 1) + Mat4::wedge(2, 3);
  b.direction = {1, 0, 0};
  return Connection::perturbed(Connection::instanton(), b);
}

Connection polarized_bump() {
  connection::Bump b;
  b.center = {0.2, 0.1, 0.0, 0.0};
  b.polarization = {1.0, 0.5, 0.0, -0.3};
  b.direction = {0.0, 0.0, 1.0};
  return Connection::perturbed(Connection::instanton(), b);
}

connection::GaugeField wavy_gauge() {
  connection::Phase p;
  p.amplitude = 0.7;
  p.wave = {0.3, -0.5, 0.2, 0.4};
  p.offset = 0.1;
  p.quadratic = 0.05;
  return connection::GaugeField::axial({0.0, 0.6, 0.8}, p);
}

std::vector<Curve> loops(std::size_t n, const Point4& base = {0.1, 0.1, 0, 0}, double scale = 0.3) {
  std::vector<Curve> out;
  for (std::uint64_t s = 1; s <= n; ++s) out.push_back(Curve::fourier_loop(s, base, scale));
  return out;
}

std::vector<RotationCurve> left_curves() {
  return {RotationCurve::constant(algebra::left_basis(0)),
          RotationCurve::constant(2 * M_PI * algebra::left_basis(0)),
          RotationCurve::trigonometric(algebra::left_matrix(0.5, -1.0, 0.3), {algebra::left_matrix(0, 1, 0)},
                                       {algebra::left_matrix(0.2, 0, -0.4)})};
}

}  // namespace

TEST_CASE("Levy trace examples") {
  const Block<double> zero{};
  CHECK(levy_trace(constant_triple(diag_block(0.25), zero)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(levy_trace(constant_triple(zero, skew_block())) == 0.0);
  KernelTriple<double> q;
  q.grid = TimeGrid::uniform(20);
  for (double t : q.grid.nodes()) {
    Block<double> b{};
    b[0] = t;
    q.levy.push_back(b);
    q.singular.push_back(zero);
  }
  CHECK(levy_trace(q) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("kernel triples are validated") {
  Block<double> bad = diag_block(1.0);
  bad[1] = 1.0;
  CHECK_THROWS_AS(levy_trace(constant_triple(bad, Block<double>{})), ContractViolation);
  Block<double> sym_s{};
  sym_s[1] = sym_s[4] = 1.0;
  CHECK_THROWS_AS(levy_trace(constant_triple(diag_block(1.0), sym_s)), ContractViolation);
  KernelTriple<double> q = constant_triple(diag_block(1.0), Block<double>{});
  q.levy.pop_back();
  CHECK_THROWS_AS(levy_trace(q), ContractViolation);
}

TEST_CASE("modified trace reductions") {
  Rng rng(1);
  const auto q = oracle::random_scalar_triple(rng);
  const double plain = levy_trace(q);
  CHECK(modified_levy_trace(RotationCurve::identity(), q).value == doctest::Approx(plain).epsilon(1e-15));
  auto qs = q;
  for (auto& b : qs.singular) b = Block<double>{};
  for (int i = 0; i < 5; ++i) {
    const auto w = oracle::random_rotation_curve(rng, i);
    CHECK(modified_levy_trace(w, qs).value == doctest::Approx(levy_trace(qs)).epsilon(1e-15));
  }
  // constant generator X and constant Q^S: value = tr Q^L - tr(X Q^S)
  const Mat4 x = oracle::random_so4(rng);
  const auto c = constant_triple(diag_block(0.25), skew_block());
  double trxs = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) trxs += x(a, b) * skew_block()[4 * b + a];
  CHECK(modified_levy_trace(RotationCurve::constant(x), c).value == doctest::Approx(1.0 - trxs).epsilon(1e-13));
}

TEST_CASE("two-term, three-term and conjugation forms agree") {
  Rng rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    const auto w = oracle::random_rotation_curve(rng, rep);
    const auto q = oracle::random_scalar_triple(rng);
    CAPTURE(rep);
    const auto m = modified_levy_trace(w, q);
    CHECK(std::fabs(m.value - m.three_term) < 1e-12 * (1.0 + std::fabs(m.value)));
    CHECK(std::fabs(m.singular - m.singular_plus - m.singular_minus) < 1e-12 * (1.0 + std::fabs(m.singular)));
    CHECK(std::fabs(levy_trace(oracle::conjugate_kernels(q, w)) - m.value) < 1e-8);

    const auto qm = oracle::random_matrix_triple(rng, 100);
    const auto mm = modified_levy_trace(w, qm);
    CHECK(max_abs(mm.value - mm.three_term) < 1e-12 * (1.0 + max_abs(mm.value)));
    CHECK(max_abs(levy_trace(oracle::conjugate_kernels(qm, w)) - mm.value) < 1e-8);
  }
}

TEST_CASE("transport kernels by direct substitution") {
  const auto flat = MetricChart::flat();
  const Curve g = Curve::fourier_loop(7, {0.1, 0.2, 0.0, -0.1}, 0.5);
  const auto zk = transport_kernels(Connection::zero(), flat, g);
  for (std::size_t k = 0; k < zk.kernels.grid.size(); k += 37)
    for (int e = 0; e < 16; ++e) {
      CHECK(max_abs(zk.kernels.levy[k][e]) == 0.0);
      CHECK(max_abs(zk.kernels.singular[k][e]) == 0.0);
    }

  const Connection a = Connection::instanton();
  const auto tk = transport_kernels(a, flat, g);
  tk.kernels.validate(1e-12);
  const auto u = transport::gauge_transport(a, g);
  REQUIRE(u.size() == tk.kernels.grid.size());
  const Mat4 uend = u.u_end();
  double worst = 0.0;
  for (std::size_t k = 0; k < u.size(); k += 13) {
    const auto f = connection::curvature(a, flat, g.position(u.grid.t(k))).f;
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) {
        const Mat4 expect = uend * u.u[k].transposed() * f[m][n] * u.u[k];
        worst = std::max(worst, max_abs(tk.kernels.singular[k][4 * m + n] - expect));
      }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("Levy Laplacian of the transport: examples") {
  const auto flat = MetricChart::flat();
  const Curve g = loops(1)[0];
  const auto w = left_curves()[0];
  const LevyResult z = modified_levy_laplacian_transport(Connection::zero(), flat, g, w);
  CHECK(max_abs(z.value) == 0.0);
  CHECK(max_abs(z.term_ym) == 0.0);
  CHECK(max_abs(z.term_rot) == 0.0);

  for (const auto& wc : left_curves()) {
    for (const auto& loop : loops(4)) {
      const LevyResult r = modified_levy_laplacian_transport(Connection::instanton(), flat, loop, wc);
      CHECK(r.norm() < 1e-6);
      CHECK(r.vanishes());
      CHECK(r.threshold <= 1e-5);
      CHECK(max_abs(r.term_rot_minus) < 1e-12);
      CHECK(max_abs(r.term_rot) < 1e-6);
      CHECK(r.route_discrepancy < 1e-6);
    }
  }

  const auto turn = left_curves()[1];
  double best = 0.0;
  for (const auto& loop : loops(5)) {
    const LevyResult p = modified_levy_laplacian_transport(field_bump(), flat, loop, turn);
    best = std::max(best, p.norm());
    CHECK(p.route_discrepancy < 1e-6);
    CHECK(frobenius_norm(p.term_rot_plus) > frobenius_norm(p.term_ym));
  }
  CHECK(best > 1e-3);
}

TEST_CASE("without rotation the Laplacian is the Yang-Mills term") {
  const auto flat = MetricChart::flat();
  const auto id = RotationCurve::identity();
  for (const auto& a : {Connection::instanton(), Connection::gauge_transformed(Connection::instanton(), wavy_gauge()),
                        Connection::instanton(0.6, {0.3, 0, 0, 0}, connection::Duality::SelfDual)}) {
    for (const auto& loop : loops(3)) {
      const LevyResult r = modified_levy_laplacian_transport(a, flat, loop, id);
      CHECK(max_abs(r.term_rot) == 0.0);
      CHECK(max_abs(r.value - r.term_ym) < 1e-15);
      CHECK(r.norm() < 1e-6);
    }
  }
  const LevyResult p = modified_levy_laplacian_transport(polarized_bump(), flat, Curve::segment({-0.5, 0, 0, 0}, {0.8, 0.3, 0, 0}), id);
  CHECK(p.norm() > 1e-3);
}

TEST_CASE("route equivalence and split consistency over charts and rotations") {
  Rng rng(3);
  const std::vector<Connection> cs{Connection::instanton(), polarized_bump(),
                                   Connection::gauge_transformed(field_bump(), wavy_gauge())};
  const std::vector<MetricChart> charts{MetricChart::flat(), MetricChart::round_s4(), MetricChart::s1xs3(),
                                        MetricChart::round_s4().with_orientation(geometry::Orientation::Left)};
  for (const auto& chart : charts) {
    for (std::size_t c = 0; c < cs.size(); ++c) {
      const auto w = oracle::random_rotation_curve(rng, static_cast<int>(c + 2));
      const Curve loop = Curve::fourier_loop(20 + c, {0.1, 0.0, 0.1, 0.0}, 0.4);
      const auto tk = transport_kernels(cs[c], chart, loop);
      const LevyResult r = modified_levy_laplacian_transport(tk, w);
      CHECK(r.route_discrepancy < 1e-6);
      CHECK(r.split_discrepancy < 1e-8);
      CHECK(max_abs(r.value - (r.term_ym - r.term_rot)) < 1e-12);
      // the kernel route is the modified trace of the same kernels
      CHECK(max_abs(r.kernel_route - modified_levy_trace(w, tk.kernels).value) < 1e-15);
    }
  }
}

TEST_CASE("a right rotation sees the self-dual part only through term_rot_minus") {
  const auto flat = MetricChart::flat();
  const auto w = RotationCurve::constant(algebra::right_basis(0));
  const LevyResult r = modified_levy_laplacian_transport(Connection::instanton(), flat, loops(1)[0], w);
  CHECK(max_abs(r.term_rot_plus) < 1e-12);
  CHECK(frobenius_norm(r.term_rot_minus) > 1e-3);
  CHECK(r.route_discrepancy < 1e-6);
}

TEST_CASE("Laplacian of integral functionals") {
  const auto flat = MetricChart::flat();
  std::vector<Curve> cs = loops(3);
  cs.push_back(Curve::segment({0, 0, 0, 0}, {1, 2, 3, 4}));
  cs.push_back(Curve::circle({0, 0, 0, 0}, 2.0, 0, 3));
  const auto ws = left_curves();
  Rng rng(4);
  for (const auto& g : cs) {
    const auto harm = levy_laplacian_functional(geometry::ScalarField::product(0, 1), flat, g, ws[0]);
    CHECK(std::fabs(harm.value) < 1e-12);
    std::vector<double> vals;
    for (const auto& w : {ws[0], ws[2], oracle::random_rotation_curve(rng, 0)}) {
      const auto r = levy_laplacian_functional(geometry::ScalarField::quadratic(1.0), flat, g, w);
      CHECK(r.value == doctest::Approx(8.0).epsilon(1e-8));
      CHECK(r.singular == 0.0);
      vals.push_back(r.value);
    }
    CHECK(std::fabs(vals[1] - vals[0]) < 1e-12);
    CHECK(std::fabs(vals[2] - vals[0]) < 1e-12);
  }
  // curved chart: the kernel trace reproduces int Delta f(gamma(t)) dt
  const auto chart = MetricChart::round_s4();
  const auto f = geometry::ScalarField::gaussian(1.0, {0.2, 0, 0, 0}, 0.8);
  const auto r = levy_laplacian_functional(f, chart, cs[0], ws[1]);
  const double direct = simpson([&](double t) { return geometry::laplace_beltrami(chart, cs[0].position(t), f); }, 0, 1, 2000);
  CHECK(r.value == doctest::Approx(direct).epsilon(1e-8));
  CHECK(r.direct == doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("diagonal kernel integral of shrinking curves") {
  const auto flat = MetricChart::flat();
  const std::vector<double> rs{0.5, 0.25, 0.125, 0.0625};
  const Curve g = Curve::segment({0.0, 0.1, 0.0, 0.0}, {0.3, 0.2, 0.1, 0.0});
  const auto w = left_curves()[1];

  const Lemma2Report z = lemma2_limit(Connection::zero(), flat, g, w, rs);
  for (const auto& row : z.rows) CHECK(max_abs(row.value) == 0.0);
  CHECK(max_abs(z.endpoint) == 0.0);

  const Lemma2Report i = lemma2_limit(Connection::instanton(), flat, g, w, rs);
  for (const auto& row : i.rows) CHECK(frobenius_norm(row.value) < 1e-8);
  CHECK(frobenius_norm(i.endpoint) < 1e-12);

  const Lemma2Report p = lemma2_limit(field_bump(), flat, g, w, rs);
  CHECK(frobenius_norm(p.endpoint) > 1e-3);
  CHECK(max_abs(p.endpoint - p.endpoint_bivector) < 1e-10);
  CHECK(p.c_fit > 0.0);
  CHECK(p.r_squared > 0.99);
  CHECK(p.bound_holds);
  REQUIRE(p.rows.size() == rs.size());
  for (std::size_t k = 1; k < p.rows.size(); ++k) CHECK(p.rows[k].residual < p.rows[k - 1].residual);

  CHECK_THROWS_AS(lemma2_limit(field_bump(), flat, g, RotationCurve::constant(algebra::right_basis(0)), rs),
                  ContractViolation);
}
