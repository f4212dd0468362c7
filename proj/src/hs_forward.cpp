#include "tmca/hs_forward.hpp"

#include <cstddef>
#include <string>

#include "tmca/parallel.hpp"

namespace tmca {

SpectralCube::SpectralCube(int rows, int cols, int bands, double fill)
    : rows(rows), cols(cols), bands(bands),
      voxels(static_cast<std::size_t>(rows) * cols * bands, fill) {
  if (rows < 0 || cols < 0 || bands < 1) {
    throw DimensionError("SpectralCube: invalid dimensions");
  }
}

void SpectralConfig::validate() const {
  if (bands < 1) throw DimensionError("SpectralConfig: bands must be >= 1");
  if (dispersion_step < 1) throw DimensionError("SpectralConfig: dispersion_step must be >= 1");
  if (!sensor_response.empty()) {
    if (static_cast<int>(sensor_response.size()) != bands) {
      throw DimensionError("SpectralConfig: sensor_response length differs from band count");
    }
    for (double k : sensor_response) {
      if (!(k >= 0.0)) throw InvalidInputError("SpectralConfig: kappa must be non-negative");
    }
  }
}

namespace {

void check_codes(const ApertureSequence& aperture, const ShutterSequence& shutter,
                 const SpectralConfig& cfg, Shape2 scene_spatial) {
  cfg.validate();
  aperture.validate();
  shutter.validate();
  if (aperture.num_slots() != shutter.num_slots()) {
    throw DimensionError("hs_forward: aperture and shutter slot counts differ");
  }
  if (aperture.shape() != scene_spatial) {
    throw DimensionError("hs_forward: aperture shape differs from scene spatial shape");
  }
  const Shape2 sensor{scene_spatial.rows, cfg.snapshot_cols(scene_spatial.cols)};
  if (shutter.shape() != sensor) {
    throw DimensionError("hs_forward: shutter shape must be the dispersed sensor shape (" +
                         std::to_string(sensor.rows) + "x" + std::to_string(sensor.cols) + ")");
  }
}

}  // namespace

Snapshot hs_simulate(const SpectralCube& cube, const ApertureSequence& aperture,
                     const ShutterSequence& shutter, const SpectralConfig& cfg) {
  check_codes(aperture, shutter, cfg, cube.spatial_shape());
  if (cube.bands != cfg.bands) {
    throw DimensionError("hs_simulate: cube band count differs from config");
  }

  const int step = cfg.dispersion_step;
  const int sensor_cols = cfg.snapshot_cols(cube.cols);
  Snapshot out(cube.rows, sensor_cols);
  parallel_for(0, cube.rows, [&](int m) {
    for (int n = 0; n < sensor_cols; ++n) {
      double acc = 0.0;
      for (int k = 0; k < shutter.num_slots(); ++k) {
        if (!shutter.slots[static_cast<std::size_t>(k)](m, n)) continue;
        const BinaryMask& t = aperture.slots[static_cast<std::size_t>(k)];
        for (int l = 0; l < cube.bands; ++l) {
          const int j = n - l * step;
          if (j < 0 || j >= cube.cols) continue;
          if (t(m, j)) {
            acc += cfg.kappa(l) * cube.at(m, j, l);
          }
        }
      }
      out(m, n) = acc;
    }
  });
  return out;
}

EquivalentApertureHS hs_equivalent_aperture(const ApertureSequence& aperture,
                                            const ShutterSequence& shutter,
                                            const SpectralConfig& cfg) {
  const Shape2 scene = aperture.shape();
  check_codes(aperture, shutter, cfg, scene);

  const int step = cfg.dispersion_step;
  EquivalentApertureHS t_hat;
  t_hat.rows = scene.rows;
  t_hat.cols = scene.cols;
  t_hat.bands = cfg.bands;
  t_hat.values.assign(static_cast<std::size_t>(scene.rows) * scene.cols * cfg.bands, 0.0);
  parallel_for(0, scene.rows, [&](int i) {
    for (int j = 0; j < scene.cols; ++j) {
      for (int l = 0; l < cfg.bands; ++l) {
        double acc = 0.0;
        // j + l*step is always within the dispersed sensor width.
        for (int k = 0; k < shutter.num_slots(); ++k) {
          if (shutter.slots[static_cast<std::size_t>(k)](i, j + l * step) &&
              aperture.slots[static_cast<std::size_t>(k)](i, j)) {
            acc += 1.0;
          }
        }
        t_hat.at(i, j, l) = acc;
      }
    }
  });
  return t_hat;
}

Snapshot hs_apply_equivalent(const EquivalentApertureHS& t_hat, const SpectralCube& cube,
                             const SpectralConfig& cfg) {
  cfg.validate();
  if (t_hat.rows != cube.rows || t_hat.cols != cube.cols || t_hat.bands != cube.bands ||
      cfg.bands != cube.bands) {
    throw DimensionError("hs_apply_equivalent: dimensions differ");
  }
  const int step = cfg.dispersion_step;
  const int sensor_cols = cfg.snapshot_cols(cube.cols);
  Snapshot out(cube.rows, sensor_cols);
  parallel_for(0, cube.rows, [&](int m) {
    for (int n = 0; n < sensor_cols; ++n) {
      double acc = 0.0;
      for (int l = 0; l < cube.bands; ++l) {
        const int j = n - l * step;
        if (j < 0 || j >= cube.cols) continue;
        acc += t_hat.at(m, j, l) * cfg.kappa(l) * cube.at(m, j, l);
      }
      out(m, n) = acc;
    }
  });
  return out;
}

MeasurementMatrix hs_assemble_matrix(const ApertureSequence& aperture,
                                     const ShutterSequence& shutter, const SpectralConfig& cfg,
                                     Shape2 scene_spatial, std::int64_t max_entries) {
  check_codes(aperture, shutter, cfg, scene_spatial);

  const int step = cfg.dispersion_step;
  const Shape2 sensor{scene_spatial.rows, cfg.snapshot_cols(scene_spatial.cols)};
  const std::int64_t rows = static_cast<std::int64_t>(sensor.rows) * sensor.cols;
  const std::int64_t cols =
      static_cast<std::int64_t>(scene_spatial.rows) * scene_spatial.cols * cfg.bands;
  if (rows * cols > max_entries) {
    throw CapacityError("hs_assemble_matrix: " + std::to_string(rows * cols) +
                        " entries exceed cap " + std::to_string(max_entries));
  }

  const EquivalentApertureHS t_hat = hs_equivalent_aperture(aperture, shutter, cfg);
  MeasurementMatrix m(static_cast<int>(rows), static_cast<int>(cols), sensor);
  for (int l = 0; l < cfg.bands; ++l) {
    for (int i = 0; i < scene_spatial.rows; ++i) {
      for (int j = 0; j < scene_spatial.cols; ++j) {
        const int col = (l * scene_spatial.rows + i) * scene_spatial.cols + j;
        const int row = i * sensor.cols + (j + l * step);
        m.at(row, col) = t_hat.at(i, j, l) * cfg.kappa(l);
      }
    }
  }
  return m;
}

std::vector<double> hs_vectorize(const SpectralCube& cube) {
  std::vector<double> v(cube.size(), 0.0);
  std::size_t idx = 0;
  for (int l = 0; l < cube.bands; ++l) {
    for (int i = 0; i < cube.rows; ++i) {
      for (int j = 0; j < cube.cols; ++j) {
        v[idx++] = cube.at(i, j, l);
      }
    }
  }
  return v;
}

SpectralCube hs_from_vector(std::span<const double> v, Shape2 scene_spatial, int bands) {
  SpectralCube cube(scene_spatial.rows, scene_spatial.cols, bands);
  if (v.size() != cube.size()) {
    throw DimensionError("hs_from_vector: vector length does not match dimensions");
  }
  std::size_t idx = 0;
  for (int l = 0; l < bands; ++l) {
    for (int i = 0; i < scene_spatial.rows; ++i) {
      for (int j = 0; j < scene_spatial.cols; ++j) {
        cube.at(i, j, l) = v[idx++];
      }
    }
  }
  return cube;
}

}  // namespace tmca
