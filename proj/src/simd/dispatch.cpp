#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels.hpp"
#include "levylap/simd.hpp"

namespace levylap::simd {
namespace {

constexpr KernelTable kScalar{Isa::Scalar, "scalar", detail::mat4_mul_scalar,
                              detail::weighted_sum16_scalar, detail::axpy_scalar,
                              detail::dot_scalar};

#if defined(LEVYLAP_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2, "avx2", detail::mat4_mul_avx2,
                            detail::weighted_sum16_avx2, detail::axpy_avx2, detail::dot_avx2};
#endif

#if defined(LEVYLAP_HAVE_NEON)
constexpr KernelTable kNeon{Isa::Neon, "neon", detail::mat4_mul_neon,
                            detail::weighted_sum16_neon, detail::axpy_neon, detail::dot_neon};
#endif

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(LEVYLAP_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(LEVYLAP_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* best_table() {
  if (const char* env = std::getenv("LEVYLAP_ISA")) {
    const Isa requested = parse_isa(env);
    return &table(requested);
  }
  if (cpu_supports(Isa::Avx2)) return &table(Isa::Avx2);
  if (cpu_supports(Isa::Neon)) return &table(Isa::Neon);
  return &kScalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> ptr{best_table()};
  return ptr;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

bool available(Isa isa) { return cpu_supports(isa); }

const KernelTable& table(Isa isa) {
  if (!cpu_supports(isa)) {
    throw std::invalid_argument("SIMD kernels for '" + std::string(to_string(isa)) +
                                "' are not available on this machine");
  }
  switch (isa) {
#if defined(LEVYLAP_HAVE_AVX2)
    case Isa::Avx2:
      return kAvx2;
#endif
#if defined(LEVYLAP_HAVE_NEON)
    case Isa::Neon:
      return kNeon;
#endif
    default:
      return kScalar;
  }
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) { current().store(&table(isa), std::memory_order_release); }

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
    if (cpu_supports(isa)) out.push_back(isa);
  }
  return out;
}

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::Scalar;
  if (name == "avx2") return Isa::Avx2;
  if (name == "neon") return Isa::Neon;
  throw std::invalid_argument("unknown ISA '" + std::string(name) + "'");
}

}  // namespace levylap::simd
