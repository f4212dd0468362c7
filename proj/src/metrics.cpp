#include "tmca/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tmca {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kEps = 1e-12;

void check_shapes(const ChannelView& a, const ChannelView& b) {
  if (a.spatial != b.spatial || a.channels != b.channels) {
    throw DimensionError("metrics: operands have different shapes");
  }
  if (a.spatial.rows < 1 || a.spatial.cols < 1 || a.channels < 1) {
    throw DimensionError("metrics: empty operand");
  }
}

double sum_squared_diff(const ChannelView& a, const ChannelView& b) {
  double acc = 0.0;
  for (int ch = 0; ch < a.channels; ++ch) {
    for (int r = 0; r < a.spatial.rows; ++r) {
      for (int c = 0; c < a.spatial.cols; ++c) {
        const double d = a.value(r, c, ch) - b.value(r, c, ch);
        acc += d * d;
      }
    }
  }
  return acc;
}

double reference_peak(const ChannelView& ref) {
  double peak = 0.0;
  for (int ch = 0; ch < ref.channels; ++ch) {
    for (int r = 0; r < ref.spatial.rows; ++r) {
      for (int c = 0; c < ref.spatial.cols; ++c) {
        peak = std::max(peak, std::fabs(ref.value(r, c, ch)));
      }
    }
  }
  return peak;
}

}  // namespace

ChannelView ChannelView::of(const SpectralCube& cube) {
  ChannelView v;
  v.data = cube.voxels.data();
  v.spatial = cube.spatial_shape();
  v.channels = cube.bands;
  v.row_stride = static_cast<std::ptrdiff_t>(cube.cols) * cube.bands;
  v.col_stride = cube.bands;
  v.channel_stride = 1;
  return v;
}

ChannelView ChannelView::of(const LightField& lf) {
  ChannelView v;
  v.data = lf.samples.data();
  v.spatial = lf.spatial_shape();
  v.channels = lf.view_count();
  v.row_stride = static_cast<std::ptrdiff_t>(lf.spatial_cols) * lf.views_y * lf.views_x;
  v.col_stride = static_cast<std::ptrdiff_t>(lf.views_y) * lf.views_x;
  v.channel_stride = 1;
  return v;
}

ChannelView ChannelView::of(const Image& image) {
  ChannelView v;
  v.data = image.values().data();
  v.spatial = image.shape();
  v.channels = 1;
  v.row_stride = image.cols();
  v.col_stride = 1;
  v.channel_stride = 0;
  return v;
}

double rmse(const ChannelView& ref, const ChannelView& est) {
  check_shapes(ref, est);
  return std::sqrt(sum_squared_diff(ref, est)) / static_cast<double>(ref.total_count());
}

double rmse_conventional(const ChannelView& ref, const ChannelView& est) {
  check_shapes(ref, est);
  return std::sqrt(sum_squared_diff(ref, est) / static_cast<double>(ref.total_count()));
}

double uiqi(const ChannelView& ref, const ChannelView& est) {
  check_shapes(ref, est);
  const double n = static_cast<double>(ref.pixel_count());
  double acc = 0.0;
  for (int ch = 0; ch < ref.channels; ++ch) {
    double mu_a = 0.0;
    double mu_b = 0.0;
    for (int r = 0; r < ref.spatial.rows; ++r) {
      for (int c = 0; c < ref.spatial.cols; ++c) {
        mu_a += ref.value(r, c, ch);
        mu_b += est.value(r, c, ch);
      }
    }
    mu_a /= n;
    mu_b /= n;
    double var_a = 0.0;
    double var_b = 0.0;
    double cov = 0.0;
    for (int r = 0; r < ref.spatial.rows; ++r) {
      for (int c = 0; c < ref.spatial.cols; ++c) {
        const double da = ref.value(r, c, ch) - mu_a;
        const double db = est.value(r, c, ch) - mu_b;
        var_a += da * da;
        var_b += db * db;
        cov += da * db;
      }
    }
    var_a /= n;
    var_b /= n;
    cov /= n;
    // Stabilized luminance/contrast product: identical numerator and
    // denominator factors when the inputs match, so UIQI(a, a) == 1 exactly
    // even for constant or zero-mean bands.
    const double lum = (2.0 * mu_a * mu_b + kEps) / (mu_a * mu_a + mu_b * mu_b + kEps);
    const double str = (2.0 * cov + kEps) / (var_a + var_b + kEps);
    acc += lum * str;
  }
  return acc / ref.channels;
}

double sam(const ChannelView& ref, const ChannelView& est, int* skipped) {
  check_shapes(ref, est);
  double acc = 0.0;
  int used = 0;
  int skip = 0;
  for (int r = 0; r < ref.spatial.rows; ++r) {
    for (int c = 0; c < ref.spatial.cols; ++c) {
      double na = 0.0;
      double nb = 0.0;
      for (int ch = 0; ch < ref.channels; ++ch) {
        const double a = ref.value(r, c, ch);
        const double b = est.value(r, c, ch);
        na += a * a;
        nb += b * b;
      }
      if (na == 0.0 || nb == 0.0) {
        ++skip;
        continue;
      }
      // arccos(<x,y>/(|x||y|)) evaluated as 2*atan2(|u-v|, |u+v|) on the
      // unit vectors: identical in exact arithmetic, but stable near 0 and
      // 180 degrees, which keeps the metric scale-invariant to ~1e-15.
      const double inv_a = 1.0 / std::sqrt(na);
      const double inv_b = 1.0 / std::sqrt(nb);
      double diff = 0.0;
      double sum = 0.0;
      for (int ch = 0; ch < ref.channels; ++ch) {
        const double u = ref.value(r, c, ch) * inv_a;
        const double v = est.value(r, c, ch) * inv_b;
        diff += (u - v) * (u - v);
        sum += (u + v) * (u + v);
      }
      acc += 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
      ++used;
    }
  }
  if (skipped != nullptr) *skipped = skip;
  if (used == 0) return 0.0;
  return acc / used * 180.0 / kPi;
}

double ergas(const ChannelView& ref, const ChannelView& est) {
  check_shapes(ref, est);
  const double n = static_cast<double>(ref.pixel_count());
  std::string bad_bands;
  double acc = 0.0;
  for (int ch = 0; ch < ref.channels; ++ch) {
    double mu = 0.0;
    double ss = 0.0;
    for (int r = 0; r < ref.spatial.rows; ++r) {
      for (int c = 0; c < ref.spatial.cols; ++c) {
        mu += ref.value(r, c, ch);
        const double d = ref.value(r, c, ch) - est.value(r, c, ch);
        ss += d * d;
      }
    }
    mu /= n;
    if (std::fabs(mu) < kEps) {
      bad_bands += (bad_bands.empty() ? "" : ", ") + std::to_string(ch);
      continue;
    }
    const double band_rmse = std::sqrt(ss) / n;
    acc += (band_rmse / mu) * (band_rmse / mu);
  }
  if (!bad_bands.empty()) {
    throw InvalidInputError("ergas: near-zero reference band mean in band(s) " + bad_bands);
  }
  return 100.0 * std::sqrt(acc / ref.channels);
}

double dd(const ChannelView& ref, const ChannelView& est) {
  check_shapes(ref, est);
  double acc = 0.0;
  for (int ch = 0; ch < ref.channels; ++ch) {
    for (int r = 0; r < ref.spatial.rows; ++r) {
      for (int c = 0; c < ref.spatial.cols; ++c) {
        acc += std::fabs(ref.value(r, c, ch) - est.value(r, c, ch));
      }
    }
  }
  return acc / static_cast<double>(ref.total_count());
}

double psnr(const ChannelView& ref, const ChannelView& est, std::optional<double> peak) {
  check_shapes(ref, est);
  const double mse = sum_squared_diff(ref, est) / static_cast<double>(ref.total_count());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  const double p = peak.value_or(reference_peak(ref));
  return 10.0 * std::log10(p * p / mse);
}

double ssim(const ChannelView& ref, const ChannelView& est, std::optional<double> peak) {
  check_shapes(ref, est);
  const double p = std::max(peak.value_or(reference_peak(ref)), kEps);
  const double c1 = (0.01 * p) * (0.01 * p);
  const double c2 = (0.03 * p) * (0.03 * p);
  const int wr = std::min(8, ref.spatial.rows);
  const int wc = std::min(8, ref.spatial.cols);
  const double wn = static_cast<double>(wr) * wc;

  double acc = 0.0;
  for (int ch = 0; ch < ref.channels; ++ch) {
    double ch_acc = 0.0;
    int windows = 0;
    for (int r0 = 0; r0 + wr <= ref.spatial.rows; ++r0) {
      for (int c0 = 0; c0 + wc <= ref.spatial.cols; ++c0) {
        double mu_a = 0.0;
        double mu_b = 0.0;
        for (int r = r0; r < r0 + wr; ++r) {
          for (int c = c0; c < c0 + wc; ++c) {
            mu_a += ref.value(r, c, ch);
            mu_b += est.value(r, c, ch);
          }
        }
        mu_a /= wn;
        mu_b /= wn;
        double var_a = 0.0;
        double var_b = 0.0;
        double cov = 0.0;
        for (int r = r0; r < r0 + wr; ++r) {
          for (int c = c0; c < c0 + wc; ++c) {
            const double da = ref.value(r, c, ch) - mu_a;
            const double db = est.value(r, c, ch) - mu_b;
            var_a += da * da;
            var_b += db * db;
            cov += da * db;
          }
        }
        var_a /= wn;
        var_b /= wn;
        cov /= wn;
        ch_acc += ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
                  ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
        ++windows;
      }
    }
    acc += ch_acc / windows;
  }
  return acc / ref.channels;
}

MetricReport compute_metrics(const ChannelView& ref, const ChannelView& est,
                             std::optional<double> peak) {
  MetricReport report;
  report.rmse = rmse(ref, est);
  report.rmse_conventional = rmse_conventional(ref, est);
  report.uiqi = uiqi(ref, est);
  report.sam_degrees = sam(ref, est, &report.sam_skipped_pixels);
  report.ergas = ergas(ref, est);
  report.dd = dd(ref, est);
  report.psnr = psnr(ref, est, peak);
  report.ssim = ssim(ref, est, peak);
  return report;
}

}  // namespace tmca
