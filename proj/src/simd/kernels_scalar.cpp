#include "monopole/simd/kernels.hpp"

namespace monopole::simd {
namespace {

void cmul_acc_scalar(cplx* out, const cplx* a, const cplx* b, double sign, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = a[k].real(), ai = a[k].imag();
    const double br = b[k].real(), bi = b[k].imag();
    out[k] += cplx(sign * (ar * br - ai * bi), sign * (ar * bi + ai * br));
  }
}

void mul_real_scalar(cplx* data, const double* symbol, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) data[k] *= symbol[k];
}

void mul_complex_scalar(cplx* data, const cplx* symbol, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = data[k].real(), ai = data[k].imag();
    const double br = symbol[k].real(), bi = symbol[k].imag();
    data[k] = cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t k = 0; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    y[k] += cplx(ar * xr - ai * xi, ar * xi + ai * xr);
  }
}

double sum_abs2_scalar(const cplx* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += x[k].real() * x[k].real() + x[k].imag() * x[k].imag();
  return acc;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar,      cmul_acc_scalar, mul_real_scalar,
                                 mul_complex_scalar, axpy_scalar,     sum_abs2_scalar};
  return table;
}

}  // namespace monopole::simd
