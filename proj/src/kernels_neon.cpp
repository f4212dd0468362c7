#include <arm_neon.h>

#include <cassert>
#include <cmath>

#include "tmca/kernels.hpp"

// 2-lane double kernels for aarch64. Same contract as the AVX2 variants:
// fixed lane-combination order, deterministic per machine.

namespace tmca::kernels::neon {

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  const std::size_t tail = n - n % 2;
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < tail; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(&x[i]), vld1q_f64(&y[i]));
  }
  double sum = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (std::size_t i = tail; i < n; ++i) {
    sum += x[i] * y[i];
  }
  return sum;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  const std::size_t tail = n - n % 2;
  const float64x2_t va = vdupq_n_f64(a);
  for (std::size_t i = 0; i < tail; i += 2) {
    vst1q_f64(&y[i], vfmaq_f64(vld1q_f64(&y[i]), va, vld1q_f64(&x[i])));
  }
  for (std::size_t i = tail; i < n; ++i) {
    y[i] += a * x[i];
  }
}

void soft_threshold(std::span<const double> z, double t, std::span<double> out) {
  assert(z.size() == out.size());
  const std::size_t n = z.size();
  const std::size_t tail = n - n % 2;
  const float64x2_t vt = vdupq_n_f64(t);
  const float64x2_t zero = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < tail; i += 2) {
    float64x2_t v = vld1q_f64(&z[i]);
    float64x2_t mag = vabsq_f64(v);
    float64x2_t shrunk = vmaxq_f64(vsubq_f64(mag, vt), zero);
    uint64x2_t sign = vandq_u64(vreinterpretq_u64_f64(v), vdupq_n_u64(0x8000000000000000ULL));
    vst1q_f64(&out[i], vreinterpretq_f64_u64(vorrq_u64(vreinterpretq_u64_f64(shrunk), sign)));
  }
  for (std::size_t i = tail; i < n; ++i) {
    const double m = std::fabs(z[i]) - t;
    out[i] = m > 0.0 ? std::copysign(m, z[i]) : 0.0;
  }
}

}  // namespace tmca::kernels::neon
