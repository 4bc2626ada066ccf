#pragma once
// Data-parallel inner kernels with a scalar reference and ISA-specific variants.
//
// Every variant performs the same fused multiply-adds in the same order, so
// results are bitwise identical across ISAs. The active table is chosen once at
// startup from CPUID; LEVYLAP_ISA=scalar|avx2|neon overrides the choice.

#include <cstddef>
#include <string_view>
#include <vector>

namespace levylap::simd {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  Isa isa;
  const char* name;
  // c = a * b for row-major 4x4 matrices. c may not alias a or b.
  void (*mat4_mul)(const double* a, const double* b, double* c);
  // out[j] = sum_i weights[i] * blocks[16 i + j], accumulated in ascending i.
  void (*weighted_sum16)(const double* blocks, const double* weights,
                         std::size_t count, double* out);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // Four interleaved partial sums, combined as (s0 + s1) + (s2 + s3), then the tail.
  double (*dot)(const double* x, const double* y, std::size_t n);
};

const KernelTable& scalar_table();
bool available(Isa isa);
// Throws std::invalid_argument when the ISA is not compiled in or not supported by the CPU.
const KernelTable& table(Isa isa);

const KernelTable& active();
void select(Isa isa);
std::vector<Isa> available_isas();

std::string_view to_string(Isa isa);
Isa parse_isa(std::string_view name);

}  // namespace levylap::simd
