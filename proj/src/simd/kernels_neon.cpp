#include <arm_neon.h>

#include <cmath>

#include "kernels.hpp"

namespace levylap::simd::detail {

void mat4_mul_neon(const double* a, const double* b, double* c) {
  for (int i = 0; i < 4; ++i) {
    const double* ar = a + 4 * i;
    for (int h = 0; h < 4; h += 2) {
      float64x2_t r = vmulq_n_f64(vld1q_f64(b + h), ar[0]);
      r = vfmaq_n_f64(r, vld1q_f64(b + 4 + h), ar[1]);
      r = vfmaq_n_f64(r, vld1q_f64(b + 8 + h), ar[2]);
      r = vfmaq_n_f64(r, vld1q_f64(b + 12 + h), ar[3]);
      vst1q_f64(c + 4 * i + h, r);
    }
  }
}

void weighted_sum16_neon(const double* blocks, const double* weights, std::size_t count,
                         double* out) {
  float64x2_t acc[8];
  for (int k = 0; k < 8; ++k) acc[k] = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < count; ++i) {
    const double w = weights[i];
    const double* blk = blocks + 16 * i;
    for (int k = 0; k < 8; ++k) acc[k] = vfmaq_n_f64(acc[k], vld1q_f64(blk + 2 * k), w);
  }
  for (int k = 0; k < 8; ++k) vst1q_f64(out + 2 * k, acc[k]);
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_n_f64(vld1q_f64(y + i), vld1q_f64(x + i), alpha));
  }
  for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);  // lanes s0, s1
  float64x2_t hi = vdupq_n_f64(0.0);  // lanes s2, s3
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vfmaq_f64(lo, vld1q_f64(x + i), vld1q_f64(y + i));
    hi = vfmaq_f64(hi, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double r = (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
             (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
  for (; i < n; ++i) r = std::fma(x[i], y[i], r);
  return r;
}

}  // namespace levylap::simd::detail
