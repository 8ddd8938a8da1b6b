#pragma once

// Inner-loop kernels used by the dense linear algebra. Each kernel has a
// scalar reference implementation and optional vector variants; the variant
// is chosen once at startup from the CPU's capabilities and may be pinned with
// set_backend() (or the CAUSALTREE_SIMD environment variable: scalar|avx2|neon).

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace causaltree::simd {

enum class Backend { kScalar, kAvx2, kNeon };

std::string_view backend_name(Backend b);

// Backends compiled into this binary and supported by the running CPU.
std::vector<Backend> available_backends();

Backend active_backend();

// Throws std::invalid_argument if b is not available.
void set_backend(Backend b);

// sum_k a[k] * b[k]; a and b must have equal length.
double dot(std::span<const double> a, std::span<const double> b);

// y[k] += alpha * x[k]
void axpy(double alpha, std::span<const double> x, std::span<double> y);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace neon
#endif

}  // namespace causaltree::simd
