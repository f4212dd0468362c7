#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tmca/errors.hpp"

namespace tmca {

struct Shape2 {
  int rows = 0;
  int cols = 0;
  bool operator==(const Shape2&) const = default;
};

/// Dense row-major 2D array of doubles.
class Image {
 public:
  Image() = default;
  Image(int rows, int cols, double fill = 0.0);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Shape2 shape() const { return {rows_, cols_}; }
  std::size_t size() const { return data_.size(); }

  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// 2D array of {0,1} attenuation values, one byte per entry.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int rows, int cols, std::uint8_t fill = 0);
  /// Validates that every entry is 0 or 1.
  BinaryMask(int rows, int cols, std::vector<std::uint8_t> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Shape2 shape() const { return {rows_, cols_}; }
  std::size_t size() const { return data_.size(); }

  std::uint8_t& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  std::uint8_t operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  std::span<std::uint8_t> values() { return data_; }
  std::span<const std::uint8_t> values() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Exposure timing: K sub-exposure slots of slot_duration seconds each.
struct TimingConfig {
  int num_slots = 1;
  double slot_duration = 1.0;

  double exposure() const { return num_slots * slot_duration; }
  void validate() const {
    if (num_slots < 1) throw InvalidInputError("TimingConfig: num_slots must be >= 1");
    if (!(slot_duration > 0.0)) throw InvalidInputError("TimingConfig: slot_duration must be > 0");
  }
};

/// K binary coded-aperture patterns, one per time slot, all the same shape.
struct ApertureSequence {
  std::vector<BinaryMask> slots;

  int num_slots() const { return static_cast<int>(slots.size()); }
  Shape2 shape() const { return slots.empty() ? Shape2{} : slots.front().shape(); }
  void validate() const;
};

/// K binary pixel-shutter patterns at the sensor shape (1 = pixel on).
struct ShutterSequence {
  std::vector<BinaryMask> slots;

  int num_slots() const { return static_cast<int>(slots.size()); }
  Shape2 shape() const { return slots.empty() ? Shape2{} : slots.front().shape(); }
  void validate() const;
};

/// Per-slot field incident on the sensor.
using SlotField = Image;

/// Single coded exposure captured by the sensor.
using Snapshot = Image;

/// Dense measurement matrix mapping a vectorized scene to a vectorized
/// snapshot. Row r corresponds to sensor pixel (r / sensor.cols,
/// r % sensor.cols); the column ordering is fixed by the assembling forward
/// model (see lf_forward / hs_forward vectorize helpers).
class MeasurementMatrix {
 public:
  MeasurementMatrix() = default;
  MeasurementMatrix(int rows, int cols, Shape2 sensor_shape);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Shape2 sensor_shape() const { return sensor_; }
  std::int64_t entry_count() const { return static_cast<std::int64_t>(rows_) * cols_; }

  double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  std::span<const double> row(int r) const {
    return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
  }
  std::span<double> row(int r) {
    return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  Shape2 sensor_;
  std::vector<double> data_;
};

/// Default cap on dense assembly size (entries).
inline constexpr std::int64_t kDefaultMatrixEntryCap = 50'000'000;

}  // namespace tmca
