// AVX2 variants. Built with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "monopole/simd/kernels.hpp"

namespace monopole::simd {
namespace {

// (ar, ai) * (br, bi) for two complex numbers per register.
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);         // br br
  const __m256d b_im = _mm256_permute_pd(b, 0xF);    // bi bi
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);    // ai ar
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

void cmul_acc_avx2(cplx* out, const cplx* a, const cplx* b, double sign, std::size_t n) {
  const __m256d s = _mm256_set1_pd(sign);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d va = _mm256_loadu_pd(dp(a + k));
    const __m256d vb = _mm256_loadu_pd(dp(b + k));
    const __m256d vo = _mm256_loadu_pd(dp(out + k));
    _mm256_storeu_pd(dp(out + k), _mm256_fmadd_pd(s, cmul(va, vb), vo));
  }
  for (; k < n; ++k) out[k] += sign * a[k] * b[k];
}

void mul_real_avx2(cplx* data, const double* symbol, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    // s0 s0 s1 s1
    const __m128d s2 = _mm_loadu_pd(symbol + k);
    const __m256d s = _mm256_permute4x64_pd(_mm256_castpd128_pd256(s2), 0x50);
    _mm256_storeu_pd(dp(data + k), _mm256_mul_pd(_mm256_loadu_pd(dp(data + k)), s));
  }
  for (; k < n; ++k) data[k] *= symbol[k];
}

void mul_complex_avx2(cplx* data, const cplx* symbol, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d va = _mm256_loadu_pd(dp(data + k));
    const __m256d vs = _mm256_loadu_pd(dp(symbol + k));
    _mm256_storeu_pd(dp(data + k), cmul(va, vs));
  }
  for (; k < n; ++k) data[k] *= symbol[k];
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d va = _mm256_setr_pd(alpha.real(), alpha.imag(), alpha.real(), alpha.imag());
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d vx = _mm256_loadu_pd(dp(x + k));
    const __m256d vy = _mm256_loadu_pd(dp(y + k));
    _mm256_storeu_pd(dp(y + k), _mm256_add_pd(vy, cmul(vx, va)));
  }
  for (; k < n; ++k) y[k] += alpha * x[k];
}

double sum_abs2_avx2(const cplx* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d v0 = _mm256_loadu_pd(dp(x + k));
    const __m256d v1 = _mm256_loadu_pd(dp(x + k + 2));
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; k < n; ++k) acc += std::norm(x[k]);
  return acc;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{Isa::avx2,       cmul_acc_avx2, mul_real_avx2,
                                 mul_complex_avx2, axpy_avx2,     sum_abs2_avx2};
  return table;
}

}  // namespace monopole::simd
