#include <cmath>

#include "kernels.hpp"

namespace levylap::simd::detail {

void mat4_mul_scalar(const double* a, const double* b, double* c) {
  for (int i = 0; i < 4; ++i) {
    const double* ar = a + 4 * i;
    for (int j = 0; j < 4; ++j) {
      double s = ar[0] * b[j];
      s = std::fma(ar[1], b[4 + j], s);
      s = std::fma(ar[2], b[8 + j], s);
      s = std::fma(ar[3], b[12 + j], s);
      c[4 * i + j] = s;
    }
  }
}

void weighted_sum16_scalar(const double* blocks, const double* weights, std::size_t count,
                           double* out) {
  for (int j = 0; j < 16; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double w = weights[i];
    const double* blk = blocks + 16 * i;
    for (int j = 0; j < 16; ++j) out[j] = std::fma(w, blk[j], out[j]);
  }
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int l = 0; l < 4; ++l) s[l] = std::fma(x[i + l], y[i + l], s[l]);
  }
  double r = (s[0] + s[1]) + (s[2] + s[3]);
  for (; i < n; ++i) r = std::fma(x[i], y[i], r);
  return r;
}

}  // namespace levylap::simd::detail
