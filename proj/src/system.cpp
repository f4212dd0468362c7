#include "tmca/system.hpp"

#include "tmca/rng.hpp"

namespace tmca {

namespace {

BinaryMask random_mask(Shape2 shape, Rng& rng) {
  BinaryMask mask(shape.rows, shape.cols);
  for (auto& v : mask.values()) v = rng.bernoulli() ? 1 : 0;
  return mask;
}

}  // namespace

std::pair<Shape2, Shape2> code_shapes(const SystemDims& dims) {
  if (const auto* lf = std::get_if<LfSystemDims>(&dims)) {
    return {lf->geometry.aperture_shape(), lf->geometry.sensor};
  }
  const auto& hs = std::get<HsSystemDims>(dims);
  return {hs.scene_spatial,
          Shape2{hs.scene_spatial.rows, hs.spectral.snapshot_cols(hs.scene_spatial.cols)}};
}

std::int64_t scene_dim(const SystemDims& dims) {
  if (const auto* lf = std::get_if<LfSystemDims>(&dims)) {
    return static_cast<std::int64_t>(lf->geometry.sensor.rows) * lf->geometry.sensor.cols *
           lf->geometry.views_y * lf->geometry.views_x;
  }
  const auto& hs = std::get<HsSystemDims>(dims);
  return static_cast<std::int64_t>(hs.scene_spatial.rows) * hs.scene_spatial.cols *
         hs.spectral.bands;
}

Shape2 sensor_shape(const SystemDims& dims) { return code_shapes(dims).second; }

SceneLayout scene_layout(const SystemDims& dims) {
  if (const auto* lf = std::get_if<LfSystemDims>(&dims)) {
    return {lf->geometry.sensor, lf->geometry.views_y * lf->geometry.views_x};
  }
  const auto& hs = std::get<HsSystemDims>(dims);
  return {hs.scene_spatial, hs.spectral.bands};
}

MeasurementMatrix assemble_system_matrix(const SystemDims& dims, const ApertureSequence& aperture,
                                         const ShutterSequence& shutter,
                                         std::int64_t max_entries) {
  if (const auto* lf = std::get_if<LfSystemDims>(&dims)) {
    return lf_assemble_matrix(aperture, shutter, lf->geometry, max_entries);
  }
  const auto& hs = std::get<HsSystemDims>(dims);
  return hs_assemble_matrix(aperture, shutter, hs.spectral, hs.scene_spatial, max_entries);
}

std::pair<ApertureSequence, ShutterSequence> random_codes(const SystemDims& dims, int num_slots,
                                                          std::uint64_t seed) {
  const auto [aperture_shape, shutter_shape] = code_shapes(dims);
  Rng rng(seed);
  ApertureSequence aperture;
  ShutterSequence shutter;
  for (int k = 0; k < num_slots; ++k) {
    aperture.slots.push_back(random_mask(aperture_shape, rng));
    shutter.slots.push_back(random_mask(shutter_shape, rng));
  }
  return {std::move(aperture), std::move(shutter)};
}

std::pair<ApertureSequence, ShutterSequence> random_aperture_open_shutter(const SystemDims& dims,
                                                                          int num_slots,
                                                                          std::uint64_t seed) {
  const auto [aperture_shape, shutter_shape] = code_shapes(dims);
  Rng rng(seed);
  ApertureSequence aperture;
  ShutterSequence shutter;
  for (int k = 0; k < num_slots; ++k) {
    aperture.slots.push_back(random_mask(aperture_shape, rng));
    shutter.slots.push_back(BinaryMask(shutter_shape.rows, shutter_shape.cols, 1));
  }
  return {std::move(aperture), std::move(shutter)};
}

}  // namespace tmca
