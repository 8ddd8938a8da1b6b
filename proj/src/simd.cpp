#include "causaltree/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace causaltree::simd {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

}  // namespace scalar

namespace {

using DotFn = double (*)(const double*, const double*, std::size_t);
using AxpyFn = void (*)(double, const double*, double*, std::size_t);

struct Table {
  Backend backend;
  DotFn dot;
  AxpyFn axpy;
};

bool cpu_supports(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Table table_for(Backend b) {
  switch (b) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::kAvx2:
      return {b, &avx2::dot, &avx2::axpy};
#endif
#if defined(__aarch64__)
    case Backend::kNeon:
      return {b, &neon::dot, &neon::axpy};
#endif
    default:
      return {Backend::kScalar, &scalar::dot, &scalar::axpy};
  }
}

Backend detect() {
  if (const char* env = std::getenv("CAUSALTREE_SIMD")) {
    const std::string want(env);
    for (Backend b : available_backends())
      if (backend_name(b) == want) return b;
  }
  if (cpu_supports(Backend::kAvx2)) return Backend::kAvx2;
  if (cpu_supports(Backend::kNeon)) return Backend::kNeon;
  return Backend::kScalar;
}

std::atomic<DotFn> g_dot{nullptr};
std::atomic<AxpyFn> g_axpy{nullptr};
std::atomic<Backend> g_backend{Backend::kScalar};

void install(Backend b) {
  const Table t = table_for(b);
  g_dot.store(t.dot);
  g_axpy.store(t.axpy);
  g_backend.store(t.backend);
}

void ensure_init() {
  if (g_dot.load(std::memory_order_acquire) == nullptr) install(detect());
}

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
    case Backend::kNeon:
      return "neon";
  }
  return "unknown";
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon})
    if (cpu_supports(b)) out.push_back(b);
  return out;
}

Backend active_backend() {
  ensure_init();
  return g_backend.load();
}

void set_backend(Backend b) {
  if (!cpu_supports(b))
    throw std::invalid_argument("SIMD backend not available: " + std::string(backend_name(b)));
  install(b);
}

double dot(std::span<const double> a, std::span<const double> b) {
  ensure_init();
  return g_dot.load(std::memory_order_relaxed)(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  ensure_init();
  g_axpy.load(std::memory_order_relaxed)(alpha, x.data(), y.data(), x.size());
}

}  // namespace causaltree::simd
