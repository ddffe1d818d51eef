#include <atomic>
#include <cstdlib>
#include <string>

#include "monopole/simd/kernels.hpp"

namespace monopole::simd {

#ifdef MONOPOLE_HAVE_AVX2
const KernelTable& avx2_table();
#endif

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable* avx2_kernels() {
#if defined(MONOPOLE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* initial_choice() {
  if (const char* env = std::getenv("MONOPOLE_SIMD"); env && std::string(env) == "scalar") {
    return &scalar_kernels();
  }
  if (const KernelTable* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{initial_choice()};
  return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

Isa select(Isa isa) {
  const KernelTable* t = &scalar_kernels();
  if (isa == Isa::avx2 && avx2_kernels()) t = avx2_kernels();
  slot().store(t, std::memory_order_release);
  return t->isa;
}

void cmul_acc(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b,
              double sign) {
  active().cmul_acc(out.data(), a.data(), b.data(), sign, out.size());
}

void mul_real(std::span<cplx> data, std::span<const double> symbol) {
  active().mul_real(data.data(), symbol.data(), data.size());
}

void mul_complex(std::span<cplx> data, std::span<const cplx> symbol) {
  active().mul_complex(data.data(), symbol.data(), data.size());
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(alpha, x.data(), y.data(), y.size());
}

double sum_abs2(std::span<const cplx> x) { return active().sum_abs2(x.data(), x.size()); }

}  // namespace monopole::simd
