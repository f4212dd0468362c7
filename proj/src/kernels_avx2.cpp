#include <immintrin.h>

#include <cassert>
#include <cmath>

#include "tmca/kernels.hpp"

// 4-lane double kernels. Lane accumulators are combined in a fixed order at
// the end of each call, so a given backend is deterministic even though its
// rounding differs slightly from the scalar reference.

namespace tmca::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  const std::size_t tail = n - n % 4;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < tail; i += 4) {
    __m256d a = _mm256_loadu_pd(&x[i]);
    __m256d b = _mm256_loadu_pd(&y[i]);
    acc = _mm256_fmadd_pd(a, b, acc);
  }
  double sum = hsum(acc);
  for (std::size_t i = tail; i < n; ++i) {
    sum += x[i] * y[i];
  }
  return sum;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  const std::size_t tail = n - n % 4;
  const __m256d va = _mm256_set1_pd(a);
  for (std::size_t i = 0; i < tail; i += 4) {
    __m256d vx = _mm256_loadu_pd(&x[i]);
    __m256d vy = _mm256_loadu_pd(&y[i]);
    _mm256_storeu_pd(&y[i], _mm256_fmadd_pd(va, vx, vy));
  }
  for (std::size_t i = tail; i < n; ++i) {
    y[i] += a * x[i];
  }
}

void soft_threshold(std::span<const double> z, double t, std::span<double> out) {
  assert(z.size() == out.size());
  const std::size_t n = z.size();
  const std::size_t tail = n - n % 4;
  const __m256d vt = _mm256_set1_pd(t);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  for (std::size_t i = 0; i < tail; i += 4) {
    __m256d v = _mm256_loadu_pd(&z[i]);
    __m256d mag = _mm256_andnot_pd(sign_mask, v);
    __m256d shrunk = _mm256_max_pd(_mm256_sub_pd(mag, vt), zero);
    __m256d sign = _mm256_and_pd(sign_mask, v);
    _mm256_storeu_pd(&out[i], _mm256_or_pd(shrunk, sign));
  }
  for (std::size_t i = tail; i < n; ++i) {
    const double m = std::fabs(z[i]) - t;
    out[i] = m > 0.0 ? std::copysign(m, z[i]) : 0.0;
  }
}

}  // namespace tmca::kernels::avx2
