#include "causaltree/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace causaltree::simd::avx2 {

__attribute__((target("avx2,fma"))) double dot(const double* a, const double* b,
                                               std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
  }
  if (k + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    k += 4;
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  const __m128d lo = _mm256_castpd256_pd128(acc0);
  const __m128d hi = _mm256_extractf128_pd(acc0, 1);
  __m128d s = _mm_add_pd(lo, hi);
  s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
  double sum = _mm_cvtsd_f64(s);
  for (; k < n; ++k) sum += a[k] * b[k];
  return sum;
}

__attribute__((target("avx2,fma"))) void axpy(double alpha, const double* x, double* y,
                                              std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d vy = _mm256_loadu_pd(y + k);
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), vy));
  }
  for (; k < n; ++k) y[k] += alpha * x[k];
}

}  // namespace causaltree::simd::avx2

#endif
