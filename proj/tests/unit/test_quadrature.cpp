#include <cmath>
#include <vector>

#include "doctest.h"
#include "levylap/errors.hpp"
#include "levylap/quadrature.hpp"

using namespace levylap;

TEST_CASE("Simpson is exact on cubics") {
  auto f = [](double t) { return 1.0 - 2.0 * t + 3.0 * t * t - 4.0 * t * t * t; };
  CHECK(simpson(f, 0.0, 1.0, 2) == doctest::Approx(1.0 - 1.0 + 1.0 - 1.0).epsilon(1e-15));
  CHECK(simpson([](double t) { return std::sin(t); }, 0.0, M_PI, 64) ==
        doctest::Approx(2.0).epsilon(1e-6));
  CHECK_THROWS_AS(simpson(f, 0.0, 1.0, 3), ContractViolation);
}

TEST_CASE("time grids split at breakpoints and keep even segments") {
  const std::vector<double> b{0.3, 0.71};
  const TimeGrid g = TimeGrid::with_breakpoints(b, 100, 16);
  const auto& bounds = g.segment_bounds();
  REQUIRE(bounds.size() == 4);
  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    const std::size_t steps = bounds[s + 1] - bounds[s] - 1;
    CHECK(steps % 2 == 0);
    CHECK(steps >= 16);
  }
  CHECK(g.t(0) == 0.0);
  CHECK(g.t(g.size() - 1) == 1.0);
  const std::size_t k = g.index_of(0.3);
  CHECK(g.t(k) == doctest::Approx(0.3));
  CHECK(g.t(k + 1) == doctest::Approx(0.3));
  CHECK(g.side(k) == -1);
  CHECK(g.side(k + 1) == 1);
  CHECK_THROWS_AS(g.index_of(0.123456), ContractViolation);

  double wsum = 0.0;
  for (double w : g.weights()) wsum += w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));

  // A kink at 0.3 is integrated exactly when the grid breaks there.
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::fabs(g.t(i) - 0.3);
  CHECK(g.integrate(v) == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-14));
}

TEST_CASE("matrix integration is entrywise") {
  const TimeGrid g = TimeGrid::uniform(40);
  std::vector<Mat4> m(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) m[i] = g.t(i) * Mat4::identity() + Mat4::wedge(0, 1, 1.0);
  const Mat4 r = g.integrate(m);
  CHECK(r(0, 0) == doctest::Approx(0.5));
  CHECK(r(0, 1) == doctest::Approx(1.0));
  CHECK(r(1, 0) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(g.integrate(std::vector<double>(3)), ContractViolation);
}

TEST_CASE("pairwise summation is order-fixed and accurate") {
  std::vector<double> v(10001, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(1000.1).epsilon(1e-14));
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}
