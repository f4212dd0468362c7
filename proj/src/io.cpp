#include "tmca/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace tmca {

static_assert(std::endian::native == std::endian::little,
              "TMCA1 payloads are little-endian; big-endian hosts need byte swaps");

namespace {

constexpr std::size_t kHeaderCap = 1 << 20;

std::size_t dtype_size(const std::string& dtype) {
  if (dtype == "f64") return 8;
  if (dtype == "u8") return 1;
  throw ParseError("tensor: unknown dtype '" + dtype + "'");
}

int require_int_dim(std::int64_t v, const char* what) {
  if (v < 0 || v > 1'000'000'000) {
    throw ParseError(std::string("tensor: implausible dimension for ") + what);
  }
  return static_cast<int>(v);
}

void require_rank(const TensorFile& t, std::size_t rank, const char* what) {
  if (t.shape.size() != rank) {
    throw DimensionError(std::string(what) + ": expected rank " + std::to_string(rank) +
                         ", got " + std::to_string(t.shape.size()));
  }
}

void require_dtype(const TensorFile& t, const std::string& dtype, const char* what) {
  if (t.dtype != dtype) {
    throw InvalidInputError(std::string(what) + ": expected dtype " + dtype + ", got " + t.dtype);
  }
}

void require_payload(const TensorFile& t, std::size_t expected, const char* what) {
  const std::size_t got = t.dtype == "f64" ? t.f64.size() : t.u8.size();
  if (got != expected) {
    throw DimensionError(std::string(what) + ": payload size does not match shape");
  }
}

TensorFile codes_to_tensor(const std::vector<BinaryMask>& slots, const char* kind) {
  TensorFile t;
  t.dtype = "u8";
  t.shape = {static_cast<std::int64_t>(slots.size()), slots.front().rows(),
             slots.front().cols()};
  t.axis_labels = {"slot", "y", "x"};
  t.meta["kind"] = kind;
  t.u8.reserve(static_cast<std::size_t>(t.element_count()));
  for (const auto& slot : slots) {
    t.u8.insert(t.u8.end(), slot.values().begin(), slot.values().end());
  }
  return t;
}

std::vector<BinaryMask> tensor_to_codes(const TensorFile& t, const char* expected_kind) {
  require_rank(t, 3, "code tensor");
  require_dtype(t, "u8", "code tensor");
  if (t.meta.contains("kind") && t.meta["kind"] != expected_kind) {
    throw InvalidInputError(std::string("code tensor: meta.kind is not '") + expected_kind + "'");
  }
  const int num_slots = require_int_dim(t.shape[0], "slots");
  const int rows = require_int_dim(t.shape[1], "rows");
  const int cols = require_int_dim(t.shape[2], "cols");
  require_payload(t, static_cast<std::size_t>(num_slots) * rows * cols, "code tensor");
  std::vector<BinaryMask> slots;
  slots.reserve(static_cast<std::size_t>(num_slots));
  const std::size_t plane = static_cast<std::size_t>(rows) * cols;
  for (int k = 0; k < num_slots; ++k) {
    std::vector<std::uint8_t> entries(t.u8.begin() + static_cast<std::ptrdiff_t>(k * plane),
                                      t.u8.begin() + static_cast<std::ptrdiff_t>((k + 1) * plane));
    slots.emplace_back(rows, cols, std::move(entries));
  }
  return slots;
}

}  // namespace

std::int64_t TensorFile::element_count() const {
  std::int64_t n = 1;
  for (std::int64_t d : shape) n *= d;
  return n;
}

TensorFile read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidInputError("cannot open file: " + path.string());
  }
  std::string header;
  header.reserve(256);
  char ch = 0;
  while (in.get(ch)) {
    if (ch == '\n') break;
    header.push_back(ch);
    if (header.size() > kHeaderCap) {
      throw ParseError(path.string() + ": no header terminator within the first " +
                       std::to_string(kHeaderCap) + " bytes");
    }
  }
  if (!in) {
    throw ParseError(path.string() + ": truncated header at byte " +
                     std::to_string(header.size()));
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(header);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": malformed header JSON (" + e.what() + ")");
  }

  if (!j.contains("magic") || j["magic"] != "TMCA1") {
    throw ParseError(path.string() + ": bad magic (expected \"TMCA1\")");
  }
  TensorFile t;
  if (!j.contains("dtype") || !j["dtype"].is_string()) {
    throw ParseError(path.string() + ": missing dtype");
  }
  t.dtype = j["dtype"].get<std::string>();
  const std::size_t elem_size = dtype_size(t.dtype);
  if (!j.contains("shape") || !j["shape"].is_array()) {
    throw ParseError(path.string() + ": missing shape");
  }
  std::int64_t count_guard = 1;
  for (const auto& d : j["shape"]) {
    if (!d.is_number_integer()) throw ParseError(path.string() + ": non-integer shape entry");
    const std::int64_t v = d.get<std::int64_t>();
    if (v < 0) throw ParseError(path.string() + ": negative shape entry");
    if (v > 0 && count_guard > (std::int64_t{1} << 40) / v) {
      throw ParseError(path.string() + ": shape product too large");
    }
    count_guard *= std::max<std::int64_t>(v, 1);
    t.shape.push_back(v);
  }
  if (j.contains("axis_labels")) {
    for (const auto& l : j["axis_labels"]) t.axis_labels.push_back(l.get<std::string>());
    if (t.axis_labels.size() != t.shape.size()) {
      throw ParseError(path.string() + ": axis_labels count differs from rank");
    }
  }
  if (j.contains("meta")) t.meta = j["meta"];

  const std::size_t header_bytes = header.size() + 1;
  const std::int64_t count = t.element_count();
  const std::size_t payload_bytes = static_cast<std::size_t>(count) * elem_size;
  if (t.dtype == "f64") {
    t.f64.resize(static_cast<std::size_t>(count));
    in.read(reinterpret_cast<char*>(t.f64.data()), static_cast<std::streamsize>(payload_bytes));
  } else {
    t.u8.resize(static_cast<std::size_t>(count));
    in.read(reinterpret_cast<char*>(t.u8.data()), static_cast<std::streamsize>(payload_bytes));
  }
  const std::size_t got = static_cast<std::size_t>(in.gcount());
  if (got != payload_bytes) {
    throw ParseError(path.string() + ": payload truncated at byte " +
                     std::to_string(header_bytes + got) + " (expected " +
                     std::to_string(payload_bytes) + " payload bytes)");
  }
  if (in.get(ch)) {
    throw ParseError(path.string() + ": trailing data at byte " +
                     std::to_string(header_bytes + payload_bytes));
  }
  return t;
}

void write_tensor(const std::filesystem::path& path, const TensorFile& tensor) {
  const std::size_t elem_size = dtype_size(tensor.dtype);
  const std::int64_t count = tensor.element_count();
  const std::size_t expected =
      tensor.dtype == "f64" ? tensor.f64.size() : tensor.u8.size();
  if (expected != static_cast<std::size_t>(count)) {
    throw InvalidInputError("write_tensor: payload size does not match shape");
  }
  if (!tensor.axis_labels.empty() && tensor.axis_labels.size() != tensor.shape.size()) {
    throw InvalidInputError("write_tensor: axis_labels count differs from rank");
  }

  nlohmann::json j;
  j["magic"] = "TMCA1";
  j["dtype"] = tensor.dtype;
  j["shape"] = tensor.shape;
  j["axis_labels"] = tensor.axis_labels;
  j["meta"] = tensor.meta;
  const std::string header = j.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open file for writing: " + path.string());
  }
  out << header << '\n';
  if (tensor.dtype == "f64") {
    out.write(reinterpret_cast<const char*>(tensor.f64.data()),
              static_cast<std::streamsize>(count * static_cast<std::int64_t>(elem_size)));
  } else {
    out.write(reinterpret_cast<const char*>(tensor.u8.data()),
              static_cast<std::streamsize>(count));
  }
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

TensorFile tensor_from_image(const Image& image) {
  TensorFile t;
  t.shape = {image.rows(), image.cols()};
  t.axis_labels = {"y", "x"};
  t.f64.assign(image.values().begin(), image.values().end());
  return t;
}

Image image_from_tensor(const TensorFile& t) {
  require_rank(t, 2, "image tensor");
  require_dtype(t, "f64", "image tensor");
  Image img(require_int_dim(t.shape[0], "rows"), require_int_dim(t.shape[1], "cols"));
  require_payload(t, img.size(), "image tensor");
  std::copy(t.f64.begin(), t.f64.end(), img.values().begin());
  return img;
}

TensorFile tensor_from_cube(const SpectralCube& cube) {
  TensorFile t;
  t.shape = {cube.rows, cube.cols, cube.bands};
  t.axis_labels = {"y", "x", "band"};
  t.f64 = cube.voxels;
  return t;
}

SpectralCube cube_from_tensor(const TensorFile& t) {
  require_rank(t, 3, "cube tensor");
  require_dtype(t, "f64", "cube tensor");
  SpectralCube cube(require_int_dim(t.shape[0], "rows"), require_int_dim(t.shape[1], "cols"),
                    require_int_dim(t.shape[2], "bands"));
  require_payload(t, cube.size(), "cube tensor");
  cube.voxels = t.f64;
  return cube;
}

TensorFile tensor_from_lightfield(const LightField& lf) {
  TensorFile t;
  t.shape = {lf.spatial_rows, lf.spatial_cols, lf.views_y, lf.views_x};
  t.axis_labels = {"y", "x", "vy", "vx"};
  t.f64 = lf.samples;
  return t;
}

LightField lightfield_from_tensor(const TensorFile& t) {
  require_rank(t, 4, "light field tensor");
  require_dtype(t, "f64", "light field tensor");
  LightField lf(require_int_dim(t.shape[0], "rows"), require_int_dim(t.shape[1], "cols"),
                require_int_dim(t.shape[2], "views_y"), require_int_dim(t.shape[3], "views_x"));
  require_payload(t, lf.size(), "light field tensor");
  lf.samples = t.f64;
  return lf;
}

TensorFile tensor_from_matrix(const MeasurementMatrix& m) {
  TensorFile t;
  t.shape = {m.rows(), m.cols()};
  t.axis_labels = {"row", "col"};
  t.meta["sensor_rows"] = m.sensor_shape().rows;
  t.meta["sensor_cols"] = m.sensor_shape().cols;
  t.f64.assign(m.values().begin(), m.values().end());
  return t;
}

MeasurementMatrix matrix_from_tensor(const TensorFile& t) {
  require_rank(t, 2, "matrix tensor");
  require_dtype(t, "f64", "matrix tensor");
  const int rows = require_int_dim(t.shape[0], "rows");
  const int cols = require_int_dim(t.shape[1], "cols");
  Shape2 sensor{rows, 1};
  if (t.meta.contains("sensor_rows") && t.meta.contains("sensor_cols")) {
    sensor = {t.meta["sensor_rows"].get<int>(), t.meta["sensor_cols"].get<int>()};
  }
  MeasurementMatrix m(rows, cols, sensor);
  require_payload(t, static_cast<std::size_t>(m.entry_count()), "matrix tensor");
  std::copy(t.f64.begin(), t.f64.end(), m.values().begin());
  return m;
}

TensorFile tensor_from_aperture(const ApertureSequence& codes) {
  codes.validate();
  return codes_to_tensor(codes.slots, "aperture");
}

TensorFile tensor_from_shutter(const ShutterSequence& codes) {
  codes.validate();
  return codes_to_tensor(codes.slots, "shutter");
}

ApertureSequence aperture_from_tensor(const TensorFile& t) {
  ApertureSequence seq;
  seq.slots = tensor_to_codes(t, "aperture");
  seq.validate();
  return seq;
}

ShutterSequence shutter_from_tensor(const TensorFile& t) {
  ShutterSequence seq;
  seq.slots = tensor_to_codes(t, "shutter");
  seq.validate();
  return seq;
}

}  // namespace tmca
