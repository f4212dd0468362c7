#pragma once

#include <optional>

#include "tmca/hs_forward.hpp"
#include "tmca/lf_forward.hpp"
#include "tmca/types.hpp"

// Reconstruction quality metrics. RMSE, UIQI, SAM, ERGAS and DD follow the
// formulas used for spectral-image evaluation:
//
//   RMSE  = ||x - y||_2 / (M*N*L)          (norm over voxel COUNT; the
//           conventional ||.||_2 / sqrt(M*N*L) is reported alongside)
//   UIQI  = mean over bands of 4*cov*mu_x*mu_y /
//           ((var_x + var_y) * (mu_x^2 + mu_y^2)), stabilized so identical
//           inputs give exactly 1
//   SAM   = mean over pixels of arccos(<x, y> / (||x|| ||y||)) in degrees,
//           zero-norm pixels skipped and counted
//   ERGAS = 100 * sqrt(mean over bands of (RMSE_band / mean_band)^2), with
//           RMSE_band using the same count divisor as RMSE
//   DD    = ||x - y||_1 / (M*N*L)
//
// PSNR is 10*log10(peak^2 / MSE) and SSIM is the single-scale index with an
// 8x8 uniform window, C1 = (0.01*peak)^2, C2 = (0.03*peak)^2, averaged over
// windows and channels.

namespace tmca {

/// Strided read-only view of a multi-channel image stack: a 2D spatial grid
/// with one scalar per channel at each pixel. Adapts cubes (channels =
/// bands), light fields (channels = views) and plain images (1 channel).
struct ChannelView {
  const double* data = nullptr;
  Shape2 spatial;
  int channels = 1;
  std::ptrdiff_t row_stride = 0;
  std::ptrdiff_t col_stride = 0;
  std::ptrdiff_t channel_stride = 0;

  double value(int r, int c, int ch) const {
    return data[r * row_stride + c * col_stride + ch * channel_stride];
  }
  std::int64_t pixel_count() const {
    return static_cast<std::int64_t>(spatial.rows) * spatial.cols;
  }
  std::int64_t total_count() const { return pixel_count() * channels; }

  static ChannelView of(const SpectralCube& cube);
  static ChannelView of(const LightField& lf);
  static ChannelView of(const Image& image);
};

struct MetricReport {
  double psnr = 0.0;  // +inf on identical inputs
  double ssim = 0.0;
  double rmse = 0.0;
  double rmse_conventional = 0.0;
  double uiqi = 0.0;
  double sam_degrees = 0.0;
  int sam_skipped_pixels = 0;
  double ergas = 0.0;
  double dd = 0.0;
};

double rmse(const ChannelView& ref, const ChannelView& est);
double rmse_conventional(const ChannelView& ref, const ChannelView& est);
double uiqi(const ChannelView& ref, const ChannelView& est);
/// Returns mean spectral angle in degrees; skipped counts pixels where
/// either spectrum has zero norm.
double sam(const ChannelView& ref, const ChannelView& est, int* skipped = nullptr);
/// Throws InvalidInputError when a reference band mean is below 1e-12 in
/// magnitude (the offending bands are listed).
double ergas(const ChannelView& ref, const ChannelView& est);
double dd(const ChannelView& ref, const ChannelView& est);
/// peak defaults to the reference maximum.
double psnr(const ChannelView& ref, const ChannelView& est, std::optional<double> peak = {});
double ssim(const ChannelView& ref, const ChannelView& est, std::optional<double> peak = {});

MetricReport compute_metrics(const ChannelView& ref, const ChannelView& est,
                             std::optional<double> peak = {});

}  // namespace tmca
