#include <cmath>

#include "doctest.h"
#include "levylap/errors.hpp"
#include "levylap/geometry.hpp"
#include "levylap/rng.hpp"

using namespace levylap;
using namespace levylap::geometry;

namespace {

const double kS = 1.0 / std::sqrt(2.0);

Vec4 unit(int i) {
  Vec4 v{};
  v[i] = 1.0;
  return v;
}

Mat4 random_two_form(Rng& rng) {
  Mat4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      m(i, j) = rng.normal();
      m(j, i) = -m(i, j);
    }
  return m;
}

Point4 random_point(Rng& rng, double size) {
  return {size * rng.normal(), size * rng.normal(), size * rng.normal(), size * rng.normal()};
}

std::vector<MetricChart> all_charts() {
  return {MetricChart::flat(),
          MetricChart::conformally_flat(ScalarField::gaussian(0.3, {0.1, 0, -0.2, 0}, 0.8)),
          MetricChart::conformally_flat(ScalarField::product(0, 2, 0.2)),
          MetricChart::round_s4(),
          MetricChart::round_s4(2.5),
          MetricChart::s1xs3(),
          MetricChart::round_s4().with_orientation(Orientation::Left)};
}

double max_diff(const Mat4& a, const Mat4& b) { return max_abs(a - b); }

}  // namespace

TEST_CASE("metric presets") {
  CHECK(metric_eval(MetricChart::flat(), {0.3, -2, 5, 1}) == Mat4::identity());
  CHECK(max_diff(metric_eval(MetricChart::conformally_flat(ScalarField::constant(0.0)), {1, 2, 3, 4}),
                 Mat4::identity()) == 0.0);
  CHECK(max_diff(metric_eval(MetricChart::round_s4(), {0, 0, 0, 0}), 4.0 * Mat4::identity()) < 1e-15);
  // (2 / (1 + |x|^2))^2 at |x|^2 = 1
  CHECK(max_diff(metric_eval(MetricChart::round_s4(), {1, 0, 0, 0}), Mat4::identity()) < 1e-15);

  Rng rng(1);
  for (const auto& c : all_charts()) {
    for (int k = 0; k < 10; ++k) {
      Point4 x = random_point(rng, 0.7);
      const Mat4 g = metric_eval(c, x);
      CHECK(symmetry_defect(g) == 0.0);
      CHECK(determinant(g) > 0.0);
      CHECK(g(0, 0) > 0.0);
    }
  }
}

TEST_CASE("chart domain errors") {
  CHECK_THROWS_AS(metric_eval(MetricChart::s1xs3(), {4.0, 0, 0, 0}), DomainError);
  CHECK_NOTHROW(metric_eval(MetricChart::s1xs3(), MetricChart::s1xs3().wrap({4.0, 0, 0, 0})));
  CHECK_THROWS_AS(metric_eval(MetricChart::flat(), {NAN, 0, 0, 0}), DomainError);
  CHECK(MetricChart::s1xs3().wrap({4.0, 0, 0, 0})[0] == doctest::Approx(4.0 - 2 * M_PI));
}

TEST_CASE("volume density") {
  CHECK(volume_density(MetricChart::flat(), {1, 2, 3, 4}) == doctest::Approx(1.0));
  CHECK(volume_density(MetricChart::round_s4(), {0, 0, 0, 0}) == doctest::Approx(16.0).epsilon(1e-14));
  const auto phi = ScalarField::gaussian(0.4, {0, 0.2, 0, 0}, 1.1);
  const Point4 x{0.3, -0.1, 0.5, 0.2};
  CHECK(volume_density(MetricChart::conformally_flat(phi), x) ==
        doctest::Approx(std::exp(4.0 * phi.value(x))).epsilon(1e-13));
}

TEST_CASE("Christoffel symbols") {
  const auto flat = christoffel(MetricChart::flat(), {0.4, 1, 2, 3});
  for (const auto& m : flat) CHECK(max_abs(m) == 0.0);
  const auto s0 = christoffel(MetricChart::round_s4(), {0, 0, 0, 0});
  for (const auto& m : s0) CHECK(max_abs(m) < 1e-15);

  SUBCASE("conformal formula") {
    const auto phi = ScalarField::gaussian(0.4, {0, 0.2, 0, 0}, 1.1);
    const auto chart = MetricChart::conformally_flat(phi);
    const Point4 x{0.3, -0.1, 0.5, 0.2};
    const Vec4 d = phi.gradient(x);
    const auto g = christoffel(chart, x);
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l)
        for (int n = 0; n < 4; ++n) {
          const double expect = (k == l ? d[n] : 0.0) + (k == n ? d[l] : 0.0) - (l == n ? d[k] : 0.0);
          CHECK(g[k](l, n) == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
        }
  }

  SUBCASE("symmetric and matching finite differences") {
    Rng rng(2);
    for (const auto& c : all_charts()) {
      for (int rep = 0; rep < 5; ++rep) {
        const Point4 x = random_point(rng, 0.6);
        const auto a = christoffel(c, x);
        const auto n = christoffel_numeric(c, x, 1e-4);
        double scale = 1e-300, err = 0.0;
        for (int k = 0; k < 4; ++k) {
          CHECK(symmetry_defect(a[k]) < 1e-15 * (1.0 + max_abs(a[k])));
          scale = std::max(scale, max_abs(a[k]));
          err = std::max(err, max_abs(a[k] - n[k]));
        }
        if (c.preset() != MetricChart::Preset::Flat) CHECK(err < 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("Hodge star examples") {
  const auto flat = MetricChart::flat();
  const TwoForm e12{Mat4::wedge(0, 1)};
  CHECK(max_diff(hodge_star(flat, {}, e12).c, Mat4::wedge(2, 3)) < 1e-15);
  const TwoForm v1{kS * (Mat4::wedge(0, 1) + Mat4::wedge(2, 3))};
  CHECK(max_diff(hodge_star(flat, {}, v1).c, v1.c) < 1e-15);
  // left orientation swaps the eigenspaces
  CHECK(max_diff(hodge_star(flat.with_orientation(Orientation::Left), {}, v1).c, -1.0 * v1.c) < 1e-15);
}

TEST_CASE("Hodge star is an involution everywhere") {
  Rng rng(3);
  for (const auto& c : all_charts()) {
    for (int rep = 0; rep < 20; ++rep) {
      const Point4 x = random_point(rng, 0.8);
      const TwoForm w{random_two_form(rng)};
      const TwoForm ss = hodge_star(c, x, hodge_star(c, x, w));
      CHECK(max_diff(ss.c, w.c) < 1e-12 * (1.0 + max_abs(w.c)));
      const Bivector b{random_two_form(rng)};
      CHECK(max_diff(hodge_star(c, x, hodge_star(c, x, b)).c, b.c) < 1e-12 * (1.0 + max_abs(b.c)));
      // linear
      const TwoForm w2{random_two_form(rng)};
      const TwoForm sum{w.c + 2.0 * w2.c};
      CHECK(max_diff(hodge_star(c, x, sum).c,
                     hodge_star(c, x, w).c + 2.0 * hodge_star(c, x, w2).c) < 1e-12 * (1.0 + max_abs(sum.c)));
    }
  }
}

TEST_CASE("self-dual bases") {
  const SelfDualBasis b = selfdual_basis(Mat4::identity());
  CHECK(max_diff(b.plus[0].c, kS * (wedge(unit(0), unit(1)).c + wedge(unit(2), unit(3)).c)) < 1e-15);
  CHECK(max_diff(b.plus[1].c, kS * (wedge(unit(0), unit(2)).c - wedge(unit(1), unit(3)).c)) < 1e-15);
  const auto flat = MetricChart::flat();
  for (int i = 0; i < 3; ++i) {
    CHECK(max_diff(hodge_star(flat, {}, b.plus[i]).c, b.plus[i].c) < 1e-15);
    CHECK(max_diff(hodge_star(flat, {}, b.minus[i]).c, -1.0 * b.minus[i].c) < 1e-15);
  }

  Rng rng(4);
  for (const auto& c : all_charts()) {
    const Point4 x = random_point(rng, 0.5);
    const Mat4 g = metric_eval(c, x);
    const Mat4 e = orthonormal_frame(c, x);
    const SelfDualBasis s = selfdual_basis(e, g, c.orientation());
    for (int i = 0; i < 3; ++i) {
      CHECK(max_diff(hodge_star(c, x, s.plus[i]).c, s.plus[i].c) < 1e-12);
      CHECK(max_diff(hodge_star(c, x, s.minus[i]).c, -1.0 * s.minus[i].c) < 1e-12);
      for (int j = 0; j < 3; ++j) {
        CHECK(std::fabs(inner(g, s.plus[i], s.minus[j])) < 1e-13);
        CHECK(inner(g, s.plus[i], s.plus[j]) == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0).epsilon(1e-12));
        CHECK(inner(g, s.minus[i], s.minus[j]) == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0).epsilon(1e-12));
      }
    }
  }

  Mat4 skew = Mat4::identity();
  skew(0, 1) = 0.1;
  CHECK_THROWS_AS(selfdual_basis(skew), ContractViolation);
  CHECK_THROWS_AS(selfdual_basis(Mat4::diagonal({1, 1, 1, -1})), ContractViolation);
}

TEST_CASE("pairing and wedge conventions") {
  const TwoForm f{Mat4::wedge(0, 1, 3.0)};
  CHECK(pairing(f, wedge(unit(0), unit(1))) == doctest::Approx(3.0));
  CHECK(pairing(f, wedge(unit(1), unit(0))) == doctest::Approx(-3.0));
  CHECK(inner(Mat4::identity(), wedge(unit(0), unit(1)), wedge(unit(0), unit(1))) == doctest::Approx(1.0));
  CHECK(levi_civita_symbol(0, 1, 2, 3) == 1);
  CHECK(levi_civita_symbol(1, 0, 2, 3) == -1);
  CHECK(levi_civita_symbol(0, 0, 2, 3) == 0);
}

TEST_CASE("Laplace-Beltrami on presets") {
  const auto flat = MetricChart::flat();
  CHECK(laplace_beltrami(flat, {0.2, 0.4, -1, 2}, ScalarField::quadratic(1.0)) == doctest::Approx(8.0));
  CHECK(laplace_beltrami(flat, {0.2, 0.4, -1, 2}, ScalarField::product(0, 1)) == doctest::Approx(0.0));
  // conformally flat in dimension 4: Delta f = e^{-2phi} (Delta_0 f + 2 grad phi . grad f)
  const auto phi = ScalarField::gaussian(0.4, {0, 0.2, 0, 0}, 1.1);
  const auto f = ScalarField::gaussian(1.0, {0.3, 0, 0, 0.1}, 0.7);
  const Point4 x{0.3, -0.1, 0.5, 0.2};
  const Mat4 h = f.hessian(x);
  const Vec4 dp = phi.gradient(x), df = f.gradient(x);
  const double expect = std::exp(-2 * phi.value(x)) * (h.trace() + 2.0 * dot(dp, df));
  CHECK(laplace_beltrami(MetricChart::conformally_flat(phi), x, f) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("scalar fields have consistent derivatives") {
  Rng rng(5);
  const std::vector<ScalarField> fields{ScalarField::linear({1, -2, 0.5, 3}),
                                        ScalarField::quadratic(0.7, {0.1, 0.2, 0.3, 0.4}),
                                        ScalarField::product(1, 3, 2.0),
                                        ScalarField::gaussian(0.5, {0, 0, 0.3, 0}, 0.6),
                                        ScalarField::stereographic(1.5)};
  for (const auto& f : fields) {
    const Point4 x = random_point(rng, 0.5);
    const double h = 1e-5;
    const Vec4 g = f.gradient(x);
    const Mat4 hs = f.hessian(x);
    for (int i = 0; i < 4; ++i) {
      Point4 xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      CHECK(g[i] == doctest::Approx((f.value(xp) - f.value(xm)) / (2 * h)).epsilon(1e-8).scale(1.0));
      const Vec4 gp = f.gradient(xp), gm = f.gradient(xm);
      for (int j = 0; j < 4; ++j)
        CHECK(hs(i, j) == doctest::Approx((gp[j] - gm[j]) / (2 * h)).epsilon(1e-7).scale(1.0));
    }
  }
}
