#pragma once
// Data-parallel inner loops shared by the field code.
//
// Every kernel has a scalar reference implementation. Vector variants are
// compiled into separate translation units with their own target flags and
// selected once at runtime; the scalar table stays reachable so tests can
// compare the two.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace monopole::simd {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  // out[k] += sign * a[k] * b[k]
  void (*cmul_acc)(cplx* out, const cplx* a, const cplx* b, double sign, std::size_t n);
  // data[k] *= symbol[k]
  void (*mul_real)(cplx* data, const double* symbol, std::size_t n);
  // data[k] *= symbol[k]
  void (*mul_complex)(cplx* data, const cplx* symbol, std::size_t n);
  // y[k] += alpha * x[k]
  void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  // sum_k |x[k]|^2
  double (*sum_abs2)(const cplx* x, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* avx2_kernels();

// The table used by the library. Chosen on first use: the widest supported
// variant unless MONOPOLE_SIMD=scalar is set in the environment.
const KernelTable& active();

// Overrides the runtime choice (tests, benchmarks). Falls back to scalar if
// the requested variant is unavailable; returns the ISA actually installed.
Isa select(Isa isa);

// Span front-ends over the active table.
void cmul_acc(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b,
              double sign);
void mul_real(std::span<cplx> data, std::span<const double> symbol);
void mul_complex(std::span<cplx> data, std::span<const cplx> symbol);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
double sum_abs2(std::span<const cplx> x);

}  // namespace monopole::simd
