#pragma once

#include <cstdint>
#include <utility>
#include <variant>

#include "tmca/hs_forward.hpp"
#include "tmca/lf_forward.hpp"
#include "tmca/types.hpp"

// A small dimension wrapper so studies, reconstruction drivers, and the
// code optimizer can be written once for both imaging systems.

namespace tmca {

struct LfSystemDims {
  LightFieldGeometry geometry;
};

struct HsSystemDims {
  Shape2 scene_spatial;
  SpectralConfig spectral;
};

using SystemDims = std::variant<LfSystemDims, HsSystemDims>;

/// Shape of the code arrays for one system: {aperture shape, shutter shape}.
std::pair<Shape2, Shape2> code_shapes(const SystemDims& dims);

/// Length of the vectorized scene (matrix columns).
std::int64_t scene_dim(const SystemDims& dims);

/// Sensor shape (matrix rows = rows*cols of this).
Shape2 sensor_shape(const SystemDims& dims);

/// Spatial shape and channel count of the vectorized scene; both systems
/// vectorize channel-major with contiguous spatial planes, which is what the
/// TV regularizer in recon relies on.
struct SceneLayout {
  Shape2 spatial;
  int channels = 1;
  std::int64_t dim() const { return static_cast<std::int64_t>(spatial.rows) * spatial.cols * channels; }
};
SceneLayout scene_layout(const SystemDims& dims);

MeasurementMatrix assemble_system_matrix(const SystemDims& dims, const ApertureSequence& aperture,
                                         const ShutterSequence& shutter,
                                         std::int64_t max_entries = kDefaultMatrixEntryCap);

/// Seeded i.i.d. Bernoulli(0.5) codes for every slot of both sequences.
std::pair<ApertureSequence, ShutterSequence> random_codes(const SystemDims& dims, int num_slots,
                                                          std::uint64_t seed);

/// Seeded Bernoulli(0.5) aperture with an all-ones shutter: the traditional
/// coded-aperture-only configuration (no coded exposure).
std::pair<ApertureSequence, ShutterSequence> random_aperture_open_shutter(const SystemDims& dims,
                                                                          int num_slots,
                                                                          std::uint64_t seed);

}  // namespace tmca
