#include "causaltree/simd.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace causaltree::simd::neon {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + k), vld1q_f64(b + k));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + k + 2), vld1q_f64(b + k + 2));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; k < n; ++k) sum += a[k] * b[k];
  return sum;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) vst1q_f64(y + k, vfmaq_f64(vld1q_f64(y + k), va, vld1q_f64(x + k)));
  for (; k < n; ++k) y[k] += alpha * x[k];
}

}  // namespace causaltree::simd::neon

#endif
