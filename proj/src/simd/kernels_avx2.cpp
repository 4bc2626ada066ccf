#include <immintrin.h>

#include "kernels.hpp"

namespace levylap::simd::detail {

void mat4_mul_avx2(const double* a, const double* b, double* c) {
  const __m256d b0 = _mm256_loadu_pd(b);
  const __m256d b1 = _mm256_loadu_pd(b + 4);
  const __m256d b2 = _mm256_loadu_pd(b + 8);
  const __m256d b3 = _mm256_loadu_pd(b + 12);
  for (int i = 0; i < 4; ++i) {
    const double* ar = a + 4 * i;
    __m256d r = _mm256_mul_pd(_mm256_broadcast_sd(ar), b0);
    r = _mm256_fmadd_pd(_mm256_broadcast_sd(ar + 1), b1, r);
    r = _mm256_fmadd_pd(_mm256_broadcast_sd(ar + 2), b2, r);
    r = _mm256_fmadd_pd(_mm256_broadcast_sd(ar + 3), b3, r);
    _mm256_storeu_pd(c + 4 * i, r);
  }
}

void weighted_sum16_avx2(const double* blocks, const double* weights, std::size_t count,
                         double* out) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  for (std::size_t i = 0; i < count; ++i) {
    const __m256d w = _mm256_broadcast_sd(weights + i);
    const double* blk = blocks + 16 * i;
    acc0 = _mm256_fmadd_pd(w, _mm256_loadu_pd(blk), acc0);
    acc1 = _mm256_fmadd_pd(w, _mm256_loadu_pd(blk + 4), acc1);
    acc2 = _mm256_fmadd_pd(w, _mm256_loadu_pd(blk + 8), acc2);
    acc3 = _mm256_fmadd_pd(w, _mm256_loadu_pd(blk + 12), acc3);
  }
  _mm256_storeu_pd(out, acc0);
  _mm256_storeu_pd(out + 4, acc1);
  _mm256_storeu_pd(out + 8, acc2);
  _mm256_storeu_pd(out + 12, acc3);
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) {
    // Scalar FMA via a one-lane vector op keeps rounding identical to the reference.
    const __m128d r = _mm_fmadd_sd(_mm_set_sd(alpha), _mm_set_sd(x[i]), _mm_set_sd(y[i]));
    y[i] = _mm_cvtsd_f64(r);
  }
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  double r = (s[0] + s[1]) + (s[2] + s[3]);
  for (; i < n; ++i) {
    r = _mm_cvtsd_f64(_mm_fmadd_sd(_mm_set_sd(x[i]), _mm_set_sd(y[i]), _mm_set_sd(r)));
  }
  return r;
}

}  // namespace levylap::simd::detail
