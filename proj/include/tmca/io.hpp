#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tmca/hs_forward.hpp"
#include "tmca/lf_forward.hpp"
#include "tmca/types.hpp"

// Tensor container format ("TMCA1"): one line of JSON
//
//   {"magic":"TMCA1","dtype":"f64"|"u8","shape":[...],
//    "axis_labels":[...],"meta":{...}}
//
// terminated by a single newline, followed by the raw little-endian payload
// in row-major order. The payload byte length must equal
// product(shape) * sizeof(dtype). Code files are u8 tensors of shape
// [K, rows, cols] with axis_labels ["slot","y","x"] and meta.kind set to
// "aperture" or "shutter"; entries must be 0 or 1.

namespace tmca {

struct TensorFile {
  std::string dtype = "f64";
  std::vector<std::int64_t> shape;
  std::vector<std::string> axis_labels;
  nlohmann::json meta = nlohmann::json::object();
  std::vector<double> f64;
  std::vector<std::uint8_t> u8;

  std::int64_t element_count() const;
};

TensorFile read_tensor(const std::filesystem::path& path);
void write_tensor(const std::filesystem::path& path, const TensorFile& tensor);

// Conversions between tensors and domain types. Readers validate rank,
// dtype, and invariants; writers fill shape and axis labels.

TensorFile tensor_from_image(const Image& image);
Image image_from_tensor(const TensorFile& t);

TensorFile tensor_from_cube(const SpectralCube& cube);
SpectralCube cube_from_tensor(const TensorFile& t);

TensorFile tensor_from_lightfield(const LightField& lf);
LightField lightfield_from_tensor(const TensorFile& t);

TensorFile tensor_from_matrix(const MeasurementMatrix& m);
MeasurementMatrix matrix_from_tensor(const TensorFile& t);

TensorFile tensor_from_aperture(const ApertureSequence& codes);
TensorFile tensor_from_shutter(const ShutterSequence& codes);
ApertureSequence aperture_from_tensor(const TensorFile& t);
ShutterSequence shutter_from_tensor(const TensorFile& t);

}  // namespace tmca
