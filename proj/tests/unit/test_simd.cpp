#include <Eigen/Dense>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "levylap/mat4.hpp"
#include "levylap/rng.hpp"
#include "levylap/simd.hpp"

using namespace levylap;

namespace {

std::vector<double> draw(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal() * std::exp(3.0 * rng.normal());
  return v;
}

bool same_bits(const double* a, const double* b, std::size_t n) {
  return std::memcmp(a, b, n * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("every available ISA is bitwise identical to the scalar reference") {
  const auto& ref = simd::scalar_table();
  Rng rng(9);
  for (simd::Isa isa : simd::available_isas()) {
    const auto& t = simd::table(isa);
    CAPTURE(t.name);
    for (int rep = 0; rep < 200; ++rep) {
      const auto a = draw(rng, 16), b = draw(rng, 16);
      double c0[16], c1[16];
      ref.mat4_mul(a.data(), b.data(), c0);
      t.mat4_mul(a.data(), b.data(), c1);
      CHECK(same_bits(c0, c1, 16));

      const std::size_t count = 1 + rep % 37;
      const auto blocks = draw(rng, 16 * count), w = draw(rng, count);
      double s0[16], s1[16];
      ref.weighted_sum16(blocks.data(), w.data(), count, s0);
      t.weighted_sum16(blocks.data(), w.data(), count, s1);
      CHECK(same_bits(s0, s1, 16));

      const std::size_t n = rep % 23;
      const auto x = draw(rng, n), y = draw(rng, n);
      auto y0 = y, y1 = y;
      ref.axpy(0.37, x.data(), y0.data(), n);
      t.axpy(0.37, x.data(), y1.data(), n);
      CHECK(same_bits(y0.data(), y1.data(), n));

      const double d0 = ref.dot(x.data(), y.data(), n), d1 = t.dot(x.data(), y.data(), n);
      CHECK(same_bits(&d0, &d1, 1));
    }
  }
}

TEST_CASE("scalar kernels agree with naive loops") {
  Rng rng(10);
  const auto a = draw(rng, 16), b = draw(rng, 16);
  double c[16];
  simd::scalar_table().mat4_mul(a.data(), b.data(), c);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += a[4 * i + k] * b[4 * k + j];
      CHECK(c[4 * i + j] == doctest::Approx(s).epsilon(1e-14));
    }
  const auto x = draw(rng, 11), y = draw(rng, 11);
  double s = 0.0, mag = 0.0;
  for (int i = 0; i < 11; ++i) {
    s += x[i] * y[i];
    mag += std::fabs(x[i] * y[i]);
  }
  CHECK(std::fabs(simd::scalar_table().dot(x.data(), y.data(), 11) - s) <= 1e-14 * mag);
}

TEST_CASE("ISA names parse and selection switches the active table") {
  CHECK(simd::parse_isa("scalar") == simd::Isa::Scalar);
  CHECK(simd::parse_isa("avx2") == simd::Isa::Avx2);
  CHECK(simd::parse_isa("neon") == simd::Isa::Neon);
  CHECK_THROWS_AS(simd::parse_isa("sse9"), std::invalid_argument);
  CHECK(simd::to_string(simd::Isa::Scalar) == "scalar");
  CHECK(simd::available(simd::Isa::Scalar));

  const simd::Isa before = simd::active().isa;
  simd::select(simd::Isa::Scalar);
  CHECK(simd::active().isa == simd::Isa::Scalar);
  for (simd::Isa isa : {simd::Isa::Avx2, simd::Isa::Neon})
    if (!simd::available(isa)) CHECK_THROWS_AS(simd::table(isa), std::invalid_argument);
  simd::select(before);
  CHECK(simd::active().isa == before);
}

TEST_CASE("Mat4 inverse and determinant match Eigen") {
  Rng rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    Mat4 m;
    Eigen::Matrix4d e;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) e(i, j) = m(i, j) = rng.normal() + (i == j ? 2.0 : 0.0);
    CHECK(determinant(m) == doctest::Approx(e.determinant()).epsilon(1e-12));
    const Mat4 inv = inverse(m);
    const Eigen::Matrix4d ei = e.inverse();
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        err = std::max(err, std::fabs(inv(i, j) - ei(i, j)));
        scale = std::max(scale, std::fabs(ei(i, j)));
      }
    CHECK(err < 1e-12 * scale);
  }
  CHECK_THROWS(inverse(Mat4::zero()));
}
