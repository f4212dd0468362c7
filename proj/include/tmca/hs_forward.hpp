#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tmca/types.hpp"

// Discrete forward model for compressive spectral imaging: a coded aperture
// in front of a dispersive element that shifts band l by l*dispersion_step
// pixels along the column axis, integrated under a per-pixel coded shutter.
// For a sensor pixel (m, n):
//
//   e(m, n) = sum_k sum_l S_k(m, n) * T_k(m, n - l*step) * kappa(l)
//             * f(m, n - l*step, l)
//
// with out-of-range shifted lookups contributing zero. The sensor (and the
// shutter) is wider than the scene by the dispersion span: its column count
// is N + (L-1)*step.

namespace tmca {

/// Discretized spectral irradiance cube f(i, j, l); spatial rows x cols,
/// bands innermost.
struct SpectralCube {
  int rows = 0;
  int cols = 0;
  int bands = 1;
  std::vector<double> voxels;  // row-major over (i, j, l)

  SpectralCube() = default;
  SpectralCube(int rows, int cols, int bands, double fill = 0.0);

  double& at(int i, int j, int l) {
    return voxels[(static_cast<std::size_t>(i) * cols + j) * bands + l];
  }
  double at(int i, int j, int l) const {
    return voxels[(static_cast<std::size_t>(i) * cols + j) * bands + l];
  }

  Shape2 spatial_shape() const { return {rows, cols}; }
  std::size_t size() const { return voxels.size(); }
};

/// Band count, integer dispersion shift per band, and an optional per-band
/// sensor response kappa (empty means all ones).
struct SpectralConfig {
  int bands = 1;
  int dispersion_step = 1;
  std::vector<double> sensor_response;

  int snapshot_cols(int scene_cols) const { return scene_cols + (bands - 1) * dispersion_step; }
  double kappa(int l) const {
    return sensor_response.empty() ? 1.0 : sensor_response[static_cast<std::size_t>(l)];
  }
  void validate() const;
};

/// The equivalent spatio-spectral (color) code
/// T_hat(i, j, l) = sum_k S_k(i, j + l*step) * T_k(i, j), values in [0, K].
struct EquivalentApertureHS {
  int rows = 0;
  int cols = 0;
  int bands = 1;
  std::vector<double> values;

  double& at(int i, int j, int l) {
    return values[(static_cast<std::size_t>(i) * cols + j) * bands + l];
  }
  double at(int i, int j, int l) const {
    return values[(static_cast<std::size_t>(i) * cols + j) * bands + l];
  }
};

/// Slot-wise simulation of the dispersed coded exposure.
Snapshot hs_simulate(const SpectralCube& cube, const ApertureSequence& aperture,
                     const ShutterSequence& shutter, const SpectralConfig& cfg);

EquivalentApertureHS hs_equivalent_aperture(const ApertureSequence& aperture,
                                            const ShutterSequence& shutter,
                                            const SpectralConfig& cfg);

/// Evaluates the contracted form: band l of voxel (i, j) lands on sensor
/// pixel (i, j + l*step) with weight T_hat(i, j, l) * kappa(l).
Snapshot hs_apply_equivalent(const EquivalentApertureHS& t_hat, const SpectralCube& cube,
                             const SpectralConfig& cfg);

/// Dense measurement matrix. Column ordering is band-major:
/// col = (l * M + i) * N + j, matching hs_vectorize.
MeasurementMatrix hs_assemble_matrix(const ApertureSequence& aperture,
                                     const ShutterSequence& shutter, const SpectralConfig& cfg,
                                     Shape2 scene_spatial,
                                     std::int64_t max_entries = kDefaultMatrixEntryCap);

/// Flattens a cube in the matrix column order (band-major).
std::vector<double> hs_vectorize(const SpectralCube& cube);
SpectralCube hs_from_vector(std::span<const double> v, Shape2 scene_spatial, int bands);

}  // namespace tmca
