#include "tmca/types.hpp"

#include <string>
#include <utility>

namespace tmca {

namespace {

void check_dims(int rows, int cols, const char* what) {
  if (rows < 0 || cols < 0) {
    throw DimensionError(std::string(what) + ": negative dimension");
  }
}

template <typename Seq>
void validate_sequence(const Seq& seq, const char* what) {
  if (seq.slots.empty()) {
    throw DimensionError(std::string(what) + ": no slots");
  }
  const Shape2 shape = seq.slots.front().shape();
  for (const auto& slot : seq.slots) {
    if (slot.shape() != shape) {
      throw DimensionError(std::string(what) + ": slots disagree on shape");
    }
    for (std::uint8_t v : slot.values()) {
      if (v > 1) {
        throw InvalidInputError(std::string(what) + ": entry not in {0,1}");
      }
    }
  }
}

}  // namespace

Image::Image(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
  check_dims(rows, cols, "Image");
}

BinaryMask::BinaryMask(int rows, int cols, std::uint8_t fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
  check_dims(rows, cols, "BinaryMask");
  if (fill > 1) throw InvalidInputError("BinaryMask: fill not in {0,1}");
}

BinaryMask::BinaryMask(int rows, int cols, std::vector<std::uint8_t> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  check_dims(rows, cols, "BinaryMask");
  if (data_.size() != static_cast<std::size_t>(rows) * cols) {
    throw DimensionError("BinaryMask: entry count does not match shape");
  }
  for (std::uint8_t v : data_) {
    if (v > 1) throw InvalidInputError("BinaryMask: entry not in {0,1}");
  }
}

void ApertureSequence::validate() const { validate_sequence(*this, "ApertureSequence"); }

void ShutterSequence::validate() const { validate_sequence(*this, "ShutterSequence"); }

MeasurementMatrix::MeasurementMatrix(int rows, int cols, Shape2 sensor_shape)
    : rows_(rows), cols_(cols), sensor_(sensor_shape),
      data_(static_cast<std::size_t>(rows) * cols, 0.0) {
  check_dims(rows, cols, "MeasurementMatrix");
  if (static_cast<std::int64_t>(sensor_shape.rows) * sensor_shape.cols != rows) {
    throw DimensionError("MeasurementMatrix: sensor shape does not match row count");
  }
}

}  // namespace tmca
