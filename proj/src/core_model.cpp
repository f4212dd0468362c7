#include "tmca/core_model.hpp"

#include <cmath>
#include <cstddef>

#include "tmca/linalg.hpp"

namespace tmca {

Snapshot compose_exposure(const std::vector<SlotField>& slot_fields,
                          const ShutterSequence& shutter) {
  shutter.validate();
  if (static_cast<int>(slot_fields.size()) != shutter.num_slots()) {
    throw DimensionError("compose_exposure: slot count mismatch");
  }
  const Shape2 sensor = shutter.shape();
  for (const auto& field : slot_fields) {
    if (field.shape() != sensor) {
      throw DimensionError("compose_exposure: slot field shape differs from sensor");
    }
  }
  Snapshot out(sensor.rows, sensor.cols);
  for (int k = 0; k < shutter.num_slots(); ++k) {
    const BinaryMask& s = shutter.slots[static_cast<std::size_t>(k)];
    const SlotField& g = slot_fields[static_cast<std::size_t>(k)];
    for (int i = 0; i < sensor.rows; ++i) {
      for (int j = 0; j < sensor.cols; ++j) {
        if (s(i, j)) out(i, j) += g(i, j);
      }
    }
  }
  return out;
}

Snapshot apply_matrix(const MeasurementMatrix& matrix, std::span<const double> scene) {
  if (static_cast<int>(scene.size()) != matrix.cols()) {
    throw DimensionError("apply_matrix: scene vector length does not match matrix columns");
  }
  const Shape2 sensor = matrix.sensor_shape();
  Snapshot out(sensor.rows, sensor.cols);
  linalg::matvec(matrix.values(), matrix.rows(), matrix.cols(), scene, out.values());
  return out;
}

std::vector<double> apply_adjoint(const MeasurementMatrix& matrix, const Snapshot& snapshot) {
  if (snapshot.shape() != matrix.sensor_shape()) {
    throw DimensionError("apply_adjoint: snapshot shape does not match matrix sensor shape");
  }
  std::vector<double> scene(static_cast<std::size_t>(matrix.cols()), 0.0);
  linalg::matvec_transpose(matrix.values(), matrix.rows(), matrix.cols(), snapshot.values(),
                           scene);
  return scene;
}

BinaryMask quantize_code(const Image& logits) {
  BinaryMask mask(logits.rows(), logits.cols());
  auto src = logits.values();
  auto dst = mask.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (std::isnan(src[i])) {
      throw InvalidInputError("quantize_code: NaN logit");
    }
    dst[i] = src[i] > 0.0 ? 1 : 0;
  }
  return mask;
}

ApertureSequence quantize_aperture(const std::vector<Image>& logits) {
  ApertureSequence seq;
  seq.slots.reserve(logits.size());
  for (const auto& l : logits) seq.slots.push_back(quantize_code(l));
  seq.validate();
  return seq;
}

ShutterSequence quantize_shutter(const std::vector<Image>& logits) {
  ShutterSequence seq;
  seq.slots.reserve(logits.size());
  for (const auto& l : logits) seq.slots.push_back(quantize_code(l));
  seq.validate();
  return seq;
}

}  // namespace tmca
