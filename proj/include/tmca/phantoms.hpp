#pragma once

#include <cstdint>

#include "tmca/hs_forward.hpp"
#include "tmca/lf_forward.hpp"

// Seeded desk-scale test scenes. All phantoms are non-negative with peak
// normalized to 1 (when not identically zero).
//
//   blocks       piecewise-constant boxes drawn from a small value palette;
//                at most `levels` distinct values, friendly to TV priors
//   gauss        sum of smooth random anisotropic blobs
//   spectra_ramp per-channel linear ramps across the spatial axes

namespace tmca {

enum class PhantomKind { blocks, gauss, spectra_ramp };

PhantomKind phantom_kind_from_name(const std::string& name);
const char* phantom_kind_name(PhantomKind kind);

SpectralCube gen_phantom_cube(PhantomKind kind, int rows, int cols, int bands, std::uint64_t seed,
                              int levels = 5);

LightField gen_phantom_lightfield(PhantomKind kind, int spatial_rows, int spatial_cols,
                                  int views_y, int views_x, std::uint64_t seed, int levels = 5);

}  // namespace tmca
