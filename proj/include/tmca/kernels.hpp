#pragma once

#include <cstddef>
#include <span>

// Flat array kernels used by the dense linear algebra and proximal steps.
// Every kernel has a scalar reference implementation plus SIMD variants
// (AVX2, NEON) compiled when the toolchain supports them and selected once
// at runtime from cpuid. The dispatched entry points below are what library
// code calls; the per-backend namespaces stay visible so equivalence tests
// can compare them directly.
//
// Summation order inside one kernel call is fixed per backend, so results
// are deterministic for a given machine and independent of thread count.

namespace tmca::kernels {

enum class Backend { scalar, avx2, neon };

/// Backend selected at process start.
Backend active_backend();
const char* backend_name(Backend b);

namespace scalar {
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void soft_threshold(std::span<const double> z, double t, std::span<double> out);
}  // namespace scalar

#if defined(TMCA_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void soft_threshold(std::span<const double> z, double t, std::span<double> out);
}  // namespace avx2
#endif

#if defined(TMCA_HAVE_NEON)
namespace neon {
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void soft_threshold(std::span<const double> z, double t, std::span<double> out);
}  // namespace neon
#endif

/// Inner product of two equal-length arrays.
double dot(std::span<const double> x, std::span<const double> y);

/// y += a * x.
void axpy(double a, std::span<const double> x, std::span<double> y);

/// out[i] = sign(z[i]) * max(|z[i]| - t, 0).
void soft_threshold(std::span<const double> z, double t, std::span<double> out);

}  // namespace tmca::kernels
