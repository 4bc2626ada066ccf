#pragma once
// Internal: per-ISA kernel entry points. Kept free of standard-library headers
// so ISA-specific translation units cannot leak inline code into shared symbols.

#include <cstddef>

namespace levylap::simd::detail {

void mat4_mul_scalar(const double* a, const double* b, double* c);
void weighted_sum16_scalar(const double* blocks, const double* weights, std::size_t count, double* out);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
double dot_scalar(const double* x, const double* y, std::size_t n);

void mat4_mul_avx2(const double* a, const double* b, double* c);
void weighted_sum16_avx2(const double* blocks, const double* weights, std::size_t count, double* out);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
double dot_avx2(const double* x, const double* y, std::size_t n);

void mat4_mul_neon(const double* a, const double* b, double* c);
void weighted_sum16_neon(const double* blocks, const double* weights, std::size_t count, double* out);
void axpy_neon(double alpha, const double* x, double* y, std::size_t n);
double dot_neon(const double* x, const double* y, std::size_t n);

}  // namespace levylap::simd::detail
