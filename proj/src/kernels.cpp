#include "tmca/kernels.hpp"

#include <cassert>
#include <cmath>

namespace tmca::kernels {

namespace scalar {

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x[i] * y[i];
  }
  return acc;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] += a * x[i];
  }
}

void soft_threshold(std::span<const double> z, double t, std::span<double> out) {
  assert(z.size() == out.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double m = std::fabs(z[i]) - t;
    out[i] = m > 0.0 ? std::copysign(m, z[i]) : 0.0;
  }
}

}  // namespace scalar

namespace {

Backend detect_backend() {
#if defined(TMCA_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  if (__builtin_cpu_supports("avx2")) {
    return Backend::avx2;
  }
#endif
#if defined(TMCA_HAVE_NEON)
  return Backend::neon;
#endif
  return Backend::scalar;
}

const Backend g_backend = detect_backend();

}  // namespace

Backend active_backend() { return g_backend; }

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
    case Backend::scalar:
      return "scalar";
  }
  return "unknown";
}

double dot(std::span<const double> x, std::span<const double> y) {
#if defined(TMCA_HAVE_AVX2)
  if (g_backend == Backend::avx2) return avx2::dot(x, y);
#endif
#if defined(TMCA_HAVE_NEON)
  if (g_backend == Backend::neon) return neon::dot(x, y);
#endif
  return scalar::dot(x, y);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
#if defined(TMCA_HAVE_AVX2)
  if (g_backend == Backend::avx2) return avx2::axpy(a, x, y);
#endif
#if defined(TMCA_HAVE_NEON)
  if (g_backend == Backend::neon) return neon::axpy(a, x, y);
#endif
  return scalar::axpy(a, x, y);
}

void soft_threshold(std::span<const double> z, double t, std::span<double> out) {
#if defined(TMCA_HAVE_AVX2)
  if (g_backend == Backend::avx2) return avx2::soft_threshold(z, t, out);
#endif
#if defined(TMCA_HAVE_NEON)
  if (g_backend == Backend::neon) return neon::soft_threshold(z, t, out);
#endif
  return scalar::soft_threshold(z, t, out);
}

}  // namespace tmca::kernels
