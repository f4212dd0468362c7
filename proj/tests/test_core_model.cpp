#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "tmca/core_model.hpp"
#include "tmca/rng.hpp"
#include "testutil.hpp"

using namespace tmca;

namespace {

ShutterSequence constant_shutter(int k, int rows, int cols, std::uint8_t value) {
  ShutterSequence sh;
  for (int i = 0; i < k; ++i) sh.slots.emplace_back(rows, cols, value);
  return sh;
}

}  // namespace

TEST_CASE("compose_exposure sums slots under an open shutter") {
  Rng rng(1);
  const Image a = test::random_image(4, 5, rng);
  const std::vector<SlotField> fields = {a, a};
  const Snapshot snap = compose_exposure(fields, constant_shutter(2, 4, 5, 1));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 5; ++j) {
      CHECK(snap(i, j) == doctest::Approx(2.0 * a(i, j)).epsilon(1e-14));
    }
  }
}

TEST_CASE("compose_exposure with a closed shutter is zero") {
  Rng rng(2);
  const std::vector<SlotField> fields = {test::random_image(3, 3, rng),
                                         test::random_image(3, 3, rng)};
  const Snapshot snap = compose_exposure(fields, constant_shutter(2, 3, 3, 0));
  for (double v : snap.values()) CHECK(v == 0.0);
}

TEST_CASE("compose_exposure matches the triple-loop oracle") {
  Rng rng(3);
  const int k = 3;
  ShutterSequence sh;
  std::vector<SlotField> fields;
  for (int i = 0; i < k; ++i) {
    sh.slots.push_back(test::random_mask(4, 4, rng));
    fields.push_back(test::random_image(4, 4, rng));
  }
  const Snapshot snap = compose_exposure(fields, sh);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double acc = 0.0;
      for (int s = 0; s < k; ++s) acc += sh.slots[s](i, j) * fields[s](i, j);
      CHECK(test::close(snap(i, j), acc, 1e-15));
    }
  }
}

TEST_CASE("compose_exposure rejects mismatched shapes and slot counts") {
  Rng rng(4);
  const std::vector<SlotField> fields = {test::random_image(3, 3, rng)};
  CHECK_THROWS_AS(compose_exposure(fields, constant_shutter(2, 3, 3, 1)), DimensionError);
  const std::vector<SlotField> wrong = {test::random_image(2, 3, rng),
                                        test::random_image(2, 3, rng)};
  CHECK_THROWS_AS(compose_exposure(wrong, constant_shutter(2, 3, 3, 1)), DimensionError);
}

TEST_CASE("compose_exposure is linear in the slot fields") {
  Rng rng(5);
  const int k = 2;
  ShutterSequence sh;
  std::vector<SlotField> fa, fb, fmix;
  const double alpha = 0.7, beta = -0.4;
  for (int i = 0; i < k; ++i) {
    sh.slots.push_back(test::random_mask(5, 6, rng));
    fa.push_back(test::random_image(5, 6, rng));
    fb.push_back(test::random_image(5, 6, rng));
    Image mix(5, 6);
    for (int r = 0; r < 5; ++r) {
      for (int c = 0; c < 6; ++c) mix(r, c) = alpha * fa[i](r, c) + beta * fb[i](r, c);
    }
    fmix.push_back(std::move(mix));
  }
  const Snapshot sa = compose_exposure(fa, sh);
  const Snapshot sb = compose_exposure(fb, sh);
  const Snapshot smix = compose_exposure(fmix, sh);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 6; ++c) {
      CHECK(test::close(smix(r, c), alpha * sa(r, c) + beta * sb(r, c), 1e-12));
    }
  }
}

TEST_CASE("apply_matrix: identity, zero, and the row-dot oracle") {
  Rng rng(6);
  {
    MeasurementMatrix eye(6, 6, Shape2{2, 3});
    for (int i = 0; i < 6; ++i) eye.at(i, i) = 1.0;
    std::vector<double> scene = {1, 2, 3, 4, 5, 6};
    const Snapshot snap = apply_matrix(eye, scene);
    CHECK(snap.rows() == 2);
    CHECK(snap.cols() == 3);
    for (int i = 0; i < 6; ++i) CHECK(snap.values()[i] == scene[i]);
  }
  {
    MeasurementMatrix zero(4, 7, Shape2{2, 2});
    std::vector<double> scene(7, 1.0);
    const Snapshot snap = apply_matrix(zero, scene);
    for (double v : snap.values()) CHECK(v == 0.0);
  }
  {
    MeasurementMatrix m(12, 20, Shape2{3, 4});
    for (auto& v : m.values()) v = rng.uniform01();
    std::vector<double> x(20);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    const Snapshot snap = apply_matrix(m, x);
    for (int r = 0; r < 12; ++r) {
      double acc = 0.0;
      for (int c = 0; c < 20; ++c) acc += m.at(r, c) * x[c];
      CHECK(test::close(snap.values()[r], acc, 1e-13));
    }
  }
  {
    MeasurementMatrix m(4, 7, Shape2{2, 2});
    std::vector<double> wrong(6, 0.0);
    CHECK_THROWS_AS(apply_matrix(m, wrong), DimensionError);
  }
}

TEST_CASE("apply_adjoint satisfies the inner-product identity") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    MeasurementMatrix m(10, 16, Shape2{2, 5});
    for (auto& v : m.values()) v = rng.uniform01();
    std::vector<double> x(16);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    Snapshot y(2, 5);
    for (auto& v : y.values()) v = rng.uniform(-1.0, 1.0);

    const Snapshot mx = apply_matrix(m, x);
    const std::vector<double> mty = apply_adjoint(m, y);
    double lhs = 0.0;
    for (int i = 0; i < 10; ++i) lhs += mx.values()[i] * y.values()[i];
    double rhs = 0.0;
    for (int i = 0; i < 16; ++i) rhs += x[i] * mty[i];
    double nx = 0.0, ny = 0.0;
    for (double v : x) nx += v * v;
    for (double v : y.values()) ny += v * v;
    CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::sqrt(nx) * std::sqrt(ny));
  }
}

TEST_CASE("apply_adjoint: identity and zero") {
  MeasurementMatrix eye(4, 4, Shape2{2, 2});
  for (int i = 0; i < 4; ++i) eye.at(i, i) = 1.0;
  Snapshot snap(2, 2);
  snap(0, 0) = 3.0;
  snap(1, 1) = -2.0;
  const std::vector<double> back = apply_adjoint(eye, snap);
  CHECK(back[0] == 3.0);
  CHECK(back[3] == -2.0);

  Snapshot zero(2, 2);
  const std::vector<double> z = apply_adjoint(eye, zero);
  for (double v : z) CHECK(v == 0.0);

  Snapshot wrong(4, 1);
  CHECK_THROWS_AS(apply_adjoint(eye, wrong), DimensionError);
}

TEST_CASE("quantize_code thresholds at zero with ties to zero") {
  Image logits(1, 3);
  logits(0, 0) = -1.2;
  logits(0, 1) = 0.0;
  logits(0, 2) = 3.4;
  const BinaryMask mask = quantize_code(logits);
  CHECK(mask(0, 0) == 0);
  CHECK(mask(0, 1) == 0);  // exact zero maps to 0
  CHECK(mask(0, 2) == 1);

  Image positive(2, 2, 0.5);
  const BinaryMask ones = quantize_code(positive);
  for (auto v : ones.values()) CHECK(v == 1);

  Image bad(1, 1);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(quantize_code(bad), InvalidInputError);
}

TEST_CASE("quantize_code agrees with an elementwise sign oracle") {
  Rng rng(8);
  Image logits(20, 50);
  for (auto& v : logits.values()) v = rng.uniform(-2.0, 2.0);
  const BinaryMask mask = quantize_code(logits);
  auto lv = logits.values();
  auto mv = mask.values();
  for (std::size_t i = 0; i < lv.size(); ++i) {
    CHECK(mv[i] == (lv[i] > 0.0 ? 1 : 0));
  }
}

TEST_CASE("timing config ties exposure to slot count") {
  TimingConfig timing;
  timing.num_slots = 8;
  timing.slot_duration = 0.02;
  timing.validate();
  CHECK(timing.exposure() == doctest::Approx(0.16));

  TimingConfig bad;
  bad.num_slots = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidInputError);
  TimingConfig bad2;
  bad2.slot_duration = 0.0;
  CHECK_THROWS_AS(bad2.validate(), InvalidInputError);
}

TEST_CASE("binary code non-negativity carries to snapshots") {
  Rng rng(9);
  const int k = 3;
  ShutterSequence sh;
  std::vector<SlotField> fields;
  for (int i = 0; i < k; ++i) {
    sh.slots.push_back(test::random_mask(6, 6, rng));
    fields.push_back(test::random_image(6, 6, rng, 0.0, 2.0));
  }
  const Snapshot snap = compose_exposure(fields, sh);
  for (double v : snap.values()) CHECK(v >= 0.0);
}
