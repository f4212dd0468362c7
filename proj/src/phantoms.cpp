#include "tmca/phantoms.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tmca/rng.hpp"

namespace tmca {

namespace {

struct AxisRange {
  int lo = 0;
  int hi = 0;  // exclusive
};

AxisRange random_range(Rng& rng, int n) {
  const int a = rng.uniform_int(0, n - 1);
  const int len = rng.uniform_int(1, std::max(1, n - a));
  return {a, a + len};
}

void normalize_peak(std::vector<double>& v) {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, x);
  if (peak > 0.0) {
    for (double& x : v) x /= peak;
  }
}

// Shared 4D generator; cubes use views as the single band axis collapsed.
template <typename At>
void paint_blocks(Rng& rng, int d0, int d1, int d2, int d3, int levels, const At& at) {
  std::vector<double> palette(static_cast<std::size_t>(std::max(2, levels)));
  palette[0] = 0.0;  // background
  for (std::size_t i = 1; i < palette.size(); ++i) palette[i] = rng.uniform(0.05, 1.0);
  const int boxes = 3 * static_cast<int>(palette.size());
  for (int b = 0; b < boxes; ++b) {
    const AxisRange r0 = random_range(rng, d0);
    const AxisRange r1 = random_range(rng, d1);
    const AxisRange r2 = random_range(rng, d2);
    const AxisRange r3 = random_range(rng, d3);
    const double value = palette[static_cast<std::size_t>(
        rng.uniform_int(1, static_cast<int>(palette.size()) - 1))];
    for (int i = r0.lo; i < r0.hi; ++i) {
      for (int j = r1.lo; j < r1.hi; ++j) {
        for (int k = r2.lo; k < r2.hi; ++k) {
          for (int l = r3.lo; l < r3.hi; ++l) {
            at(i, j, k, l) = value;
          }
        }
      }
    }
  }
}

template <typename At>
void paint_gauss(Rng& rng, int d0, int d1, int d2, int d3, const At& at) {
  const int blobs = 4;
  struct Blob {
    double c0, c1, c2, c3, s0, s1, s2, s3, amp;
  };
  std::vector<Blob> bs;
  for (int b = 0; b < blobs; ++b) {
    Blob blob;
    blob.c0 = rng.uniform(0.0, d0 - 1.0);
    blob.c1 = rng.uniform(0.0, d1 - 1.0);
    blob.c2 = rng.uniform(0.0, d2 - 1.0);
    blob.c3 = rng.uniform(0.0, d3 - 1.0);
    blob.s0 = rng.uniform(0.15, 0.5) * std::max(1, d0);
    blob.s1 = rng.uniform(0.15, 0.5) * std::max(1, d1);
    blob.s2 = rng.uniform(0.15, 0.5) * std::max(1, d2);
    blob.s3 = rng.uniform(0.15, 0.5) * std::max(1, d3);
    blob.amp = rng.uniform(0.3, 1.0);
    bs.push_back(blob);
  }
  for (int i = 0; i < d0; ++i) {
    for (int j = 0; j < d1; ++j) {
      for (int k = 0; k < d2; ++k) {
        for (int l = 0; l < d3; ++l) {
          double acc = 0.0;
          for (const Blob& b : bs) {
            const double e = (i - b.c0) * (i - b.c0) / (2 * b.s0 * b.s0) +
                             (j - b.c1) * (j - b.c1) / (2 * b.s1 * b.s1) +
                             (k - b.c2) * (k - b.c2) / (2 * b.s2 * b.s2) +
                             (l - b.c3) * (l - b.c3) / (2 * b.s3 * b.s3);
            acc += b.amp * std::exp(-e);
          }
          at(i, j, k, l) = acc;
        }
      }
    }
  }
}

// Linear ramp per channel (the two trailing axes index the channel).
template <typename At>
void paint_ramp(Rng& rng, int d0, int d1, int d2, int d3, const At& at) {
  for (int k = 0; k < d2; ++k) {
    for (int l = 0; l < d3; ++l) {
      const double base = rng.uniform(0.1, 0.6);
      const double gy = rng.uniform(-0.5, 0.5);
      const double gx = rng.uniform(-0.5, 0.5);
      for (int i = 0; i < d0; ++i) {
        for (int j = 0; j < d1; ++j) {
          const double y = d0 > 1 ? static_cast<double>(i) / (d0 - 1) : 0.0;
          const double x = d1 > 1 ? static_cast<double>(j) / (d1 - 1) : 0.0;
          at(i, j, k, l) = std::max(0.0, base + gy * y + gx * x);
        }
      }
    }
  }
}

template <typename At>
void paint(PhantomKind kind, Rng& rng, int d0, int d1, int d2, int d3, int levels, const At& at) {
  switch (kind) {
    case PhantomKind::blocks:
      paint_blocks(rng, d0, d1, d2, d3, levels, at);
      return;
    case PhantomKind::gauss:
      paint_gauss(rng, d0, d1, d2, d3, at);
      return;
    case PhantomKind::spectra_ramp:
      paint_ramp(rng, d0, d1, d2, d3, at);
      return;
  }
  throw InvalidInputError("phantom: unknown kind");
}

}  // namespace

PhantomKind phantom_kind_from_name(const std::string& name) {
  if (name == "blocks") return PhantomKind::blocks;
  if (name == "gauss") return PhantomKind::gauss;
  if (name == "spectra-ramp") return PhantomKind::spectra_ramp;
  throw InvalidInputError("phantom: unknown kind '" + name + "'");
}

const char* phantom_kind_name(PhantomKind kind) {
  switch (kind) {
    case PhantomKind::blocks:
      return "blocks";
    case PhantomKind::gauss:
      return "gauss";
    case PhantomKind::spectra_ramp:
      return "spectra-ramp";
  }
  return "unknown";
}

SpectralCube gen_phantom_cube(PhantomKind kind, int rows, int cols, int bands, std::uint64_t seed,
                              int levels) {
  if (rows < 1 || cols < 1 || bands < 1) throw DimensionError("gen_phantom_cube: bad dims");
  if (levels < 2) throw InvalidInputError("gen_phantom_cube: levels must be >= 2");
  SpectralCube cube(rows, cols, bands);
  Rng rng(seed);
  paint(kind, rng, rows, cols, 1, bands, levels,
        [&](int i, int j, int, int l) -> double& { return cube.at(i, j, l); });
  normalize_peak(cube.voxels);
  return cube;
}

LightField gen_phantom_lightfield(PhantomKind kind, int spatial_rows, int spatial_cols,
                                  int views_y, int views_x, std::uint64_t seed, int levels) {
  LightField lf(spatial_rows, spatial_cols, views_y, views_x);
  if (levels < 2) throw InvalidInputError("gen_phantom_lightfield: levels must be >= 2");
  Rng rng(seed);
  paint(kind, rng, spatial_rows, spatial_cols, views_y, views_x, levels,
        [&](int i, int j, int k, int l) -> double& { return lf.at(i, j, k, l); });
  normalize_peak(lf.samples);
  return lf;
}

}  // namespace tmca
