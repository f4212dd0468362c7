#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tmca/types.hpp"

// Discrete forward model for compressive light-field imaging through a
// time-multiplexed coded aperture. A sensor pixel m integrates, over time
// slots k and angular views v, the light field sample l(m, v) attenuated by
// the aperture pattern looked up at the sheared position m + d*v:
//
//   e(m) = sum_k sum_v S_k(m) * T_k(m + d*v) * l(m, v)
//
// with d an integer shear step (pixels of aperture shift per angular index)
// and v running symmetrically over {-(U-1)/2, ..., +(U-1)/2} on each axis.
// The aperture is allocated with a margin of d*(U-1)/2 pixels per side so
// every sheared lookup is in bounds; there is no wrap or clamp.

namespace tmca {

/// Two-plane light field: spatial (y, x) by angular (vy, vx) radiance
/// samples. Angular sizes are odd; views are indexed symmetrically around
/// the optical axis.
struct LightField {
  int spatial_rows = 0;
  int spatial_cols = 0;
  int views_y = 1;
  int views_x = 1;
  std::vector<double> samples;  // row-major over (my, mx, vy, vx)

  LightField() = default;
  LightField(int spatial_rows, int spatial_cols, int views_y, int views_x, double fill = 0.0);

  double& at(int my, int mx, int vy, int vx) {
    return samples[((static_cast<std::size_t>(my) * spatial_cols + mx) * views_y + vy) * views_x +
                   vx];
  }
  double at(int my, int mx, int vy, int vx) const {
    return samples[((static_cast<std::size_t>(my) * spatial_cols + mx) * views_y + vy) * views_x +
                   vx];
  }

  Shape2 spatial_shape() const { return {spatial_rows, spatial_cols}; }
  int view_count() const { return views_y * views_x; }
  std::size_t size() const { return samples.size(); }
};

/// Geometry tying the light field to the coded aperture: sensor shape,
/// angular resolution and integer shear step. The aperture must be exactly
/// sensor + shear_step*(views-1) on each axis (the margin that keeps all
/// sheared lookups in bounds).
struct LightFieldGeometry {
  Shape2 sensor;
  int views_y = 1;
  int views_x = 1;
  int shear_step = 1;

  Shape2 aperture_shape() const {
    return {sensor.rows + shear_step * (views_y - 1), sensor.cols + shear_step * (views_x - 1)};
  }
  void validate() const;
};

/// The equivalent time-multiplexed aperture T_hat(m, v) = sum_k S_k(m) *
/// T_k(m + d*v): one angular attenuation response per sensor pixel, with
/// values in [0, K].
struct EquivalentApertureLF {
  int spatial_rows = 0;
  int spatial_cols = 0;
  int views_y = 1;
  int views_x = 1;
  std::vector<double> values;

  double& at(int my, int mx, int vy, int vx) {
    return values[((static_cast<std::size_t>(my) * spatial_cols + mx) * views_y + vy) * views_x +
                  vx];
  }
  double at(int my, int mx, int vy, int vx) const {
    return values[((static_cast<std::size_t>(my) * spatial_cols + mx) * views_y + vy) * views_x +
                  vx];
  }
};

/// Slot-wise simulation of the coded exposure.
Snapshot lf_simulate(const LightField& lf, const ApertureSequence& aperture,
                     const ShutterSequence& shutter, const LightFieldGeometry& geom);

EquivalentApertureLF lf_equivalent_aperture(const ApertureSequence& aperture,
                                            const ShutterSequence& shutter,
                                            const LightFieldGeometry& geom);

/// Evaluates the contracted form e(m) = sum_v T_hat(m, v) * l(m, v); agrees
/// with lf_simulate for the T_hat built from the same codes.
Snapshot lf_apply_equivalent(const EquivalentApertureLF& t_hat, const LightField& lf);

/// Dense measurement matrix. Column ordering is angular-major:
/// col = ((vy * Ux + vx) * My + my) * Mx + mx, matching lf_vectorize.
MeasurementMatrix lf_assemble_matrix(const ApertureSequence& aperture,
                                     const ShutterSequence& shutter,
                                     const LightFieldGeometry& geom,
                                     std::int64_t max_entries = kDefaultMatrixEntryCap);

/// Flattens a light field in the matrix column order (angular-major).
std::vector<double> lf_vectorize(const LightField& lf);
LightField lf_from_vector(std::span<const double> v, const LightFieldGeometry& geom);

}  // namespace tmca
