#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tmca/core_model.hpp"
#include "tmca/lf_forward.hpp"
#include "tmca/rng.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace tmca;

namespace {

LightFieldGeometry make_geom(int sr, int sc, int vy, int vx, int d = 1) {
  LightFieldGeometry g;
  g.sensor = {sr, sc};
  g.views_y = vy;
  g.views_x = vx;
  g.shear_step = d;
  return g;
}

ApertureSequence ones_aperture(const LightFieldGeometry& g, int k) {
  ApertureSequence ap;
  const Shape2 s = g.aperture_shape();
  for (int i = 0; i < k; ++i) ap.slots.emplace_back(s.rows, s.cols, 1);
  return ap;
}

ShutterSequence ones_shutter(const LightFieldGeometry& g, int k) {
  ShutterSequence sh;
  for (int i = 0; i < k; ++i) sh.slots.emplace_back(g.sensor.rows, g.sensor.cols, 1);
  return sh;
}

ApertureSequence random_aperture(const LightFieldGeometry& g, int k, Rng& rng) {
  ApertureSequence ap;
  const Shape2 s = g.aperture_shape();
  for (int i = 0; i < k; ++i) ap.slots.push_back(test::random_mask(s.rows, s.cols, rng));
  return ap;
}

ShutterSequence random_shutter(const LightFieldGeometry& g, int k, Rng& rng) {
  ShutterSequence sh;
  for (int i = 0; i < k; ++i) {
    sh.slots.push_back(test::random_mask(g.sensor.rows, g.sensor.cols, rng));
  }
  return sh;
}

}  // namespace

TEST_CASE("single view with open codes reduces to the plain image") {
  Rng rng(1);
  const LightFieldGeometry g = make_geom(5, 7, 1, 1);
  const LightField lf = test::random_lightfield(g, rng);
  const Snapshot snap = lf_simulate(lf, ones_aperture(g, 1), ones_shutter(g, 1), g);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 7; ++c) {
      CHECK(snap(r, c) == lf.at(r, c, 0, 0));
    }
  }
}

TEST_CASE("a fully blocked aperture yields a zero snapshot") {
  Rng rng(2);
  const LightFieldGeometry g = make_geom(4, 4, 3, 3);
  const LightField lf = test::random_lightfield(g, rng);
  ApertureSequence ap;
  const Shape2 s = g.aperture_shape();
  ap.slots.emplace_back(s.rows, s.cols, 0);
  ap.slots.emplace_back(s.rows, s.cols, 0);
  const Snapshot snap = lf_simulate(lf, ap, random_shutter(g, 2, rng), g);
  for (double v : snap.values()) CHECK(v == 0.0);
}

TEST_CASE("lf_simulate matches the five-loop oracle") {
  Rng rng(3);
  const LightFieldGeometry g = make_geom(6, 6, 3, 3);
  const LightField lf = test::random_lightfield(g, rng);
  const ApertureSequence ap = random_aperture(g, 2, rng);
  const ShutterSequence sh = random_shutter(g, 2, rng);
  const Snapshot got = lf_simulate(lf, ap, sh, g);
  const Snapshot want = test::lf_bruteforce(lf, ap, sh, g);
  CHECK(test::max_rel_gap(got.values(), want.values()) < 1e-12);
}

TEST_CASE("equivalent aperture reductions") {
  Rng rng(4);
  const LightFieldGeometry g = make_geom(4, 4, 3, 3, 1);

  SUBCASE("K=1, open shutter: pure sheared coded aperture") {
    const ApertureSequence ap = random_aperture(g, 1, rng);
    const EquivalentApertureLF t_hat = lf_equivalent_aperture(ap, ones_shutter(g, 1), g);
    for (int my = 0; my < 4; ++my) {
      for (int mx = 0; mx < 4; ++mx) {
        for (int vy = 0; vy < 3; ++vy) {
          for (int vx = 0; vx < 3; ++vx) {
            CHECK(t_hat.at(my, mx, vy, vx) == static_cast<double>(ap.slots[0](my + vy, mx + vx)));
          }
        }
      }
    }
  }

  SUBCASE("open aperture: angularly constant shutter sum") {
    const int k = 4;
    const ShutterSequence sh = random_shutter(g, k, rng);
    const EquivalentApertureLF t_hat = lf_equivalent_aperture(ones_aperture(g, k), sh, g);
    for (int my = 0; my < 4; ++my) {
      for (int mx = 0; mx < 4; ++mx) {
        double want = 0.0;
        for (int s = 0; s < k; ++s) want += sh.slots[s](my, mx);
        for (int vy = 0; vy < 3; ++vy) {
          for (int vx = 0; vx < 3; ++vx) {
            CHECK(t_hat.at(my, mx, vy, vx) == want);
          }
        }
      }
    }
  }

  SUBCASE("values stay within [0, K]") {
    const int k = 5;
    const EquivalentApertureLF t_hat =
        lf_equivalent_aperture(random_aperture(g, k, rng), random_shutter(g, k, rng), g);
    for (double v : t_hat.values) {
      CHECK(v >= 0.0);
      CHECK(v <= k);
    }
  }
}

TEST_CASE("slot-wise and contracted evaluations agree") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const LightFieldGeometry g = make_geom(4, 4, 3, 3);
    const LightField lf = test::random_lightfield(g, rng);
    const ApertureSequence ap = random_aperture(g, 3, rng);
    const ShutterSequence sh = random_shutter(g, 3, rng);
    const Snapshot direct = lf_simulate(lf, ap, sh, g);
    const Snapshot contracted = lf_apply_equivalent(lf_equivalent_aperture(ap, sh, g), lf);
    CHECK(test::max_rel_gap(direct.values(), contracted.values()) < 1e-12);
  }
}

TEST_CASE("assembled matrix reproduces the simulation") {
  Rng rng(6);
  const LightFieldGeometry g = make_geom(4, 4, 3, 3);
  const ApertureSequence ap = random_aperture(g, 2, rng);
  const ShutterSequence sh = random_shutter(g, 2, rng);
  const MeasurementMatrix m = lf_assemble_matrix(ap, sh, g);
  CHECK(m.rows() == 16);
  CHECK(m.cols() == 16 * 9);
  for (double v : m.values()) CHECK(v >= 0.0);

  for (int scene = 0; scene < 50; ++scene) {
    const LightField lf = test::random_lightfield(g, rng);
    const Snapshot via_matrix = apply_matrix(m, lf_vectorize(lf));
    const Snapshot direct = lf_simulate(lf, ap, sh, g);
    CHECK(test::max_rel_gap(via_matrix.values(), direct.values()) < 1e-12);
  }
}

TEST_CASE("single-view open-code matrix is the identity") {
  const LightFieldGeometry g = make_geom(3, 4, 1, 1);
  const MeasurementMatrix m = lf_assemble_matrix(ones_aperture(g, 1), ones_shutter(g, 1), g);
  CHECK(m.rows() == 12);
  CHECK(m.cols() == 12);
  for (int r = 0; r < 12; ++r) {
    for (int c = 0; c < 12; ++c) {
      CHECK(m.at(r, c) == (r == c ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("closed shutter assembles the zero matrix") {
  Rng rng(7);
  const LightFieldGeometry g = make_geom(3, 3, 3, 3);
  ShutterSequence sh;
  sh.slots.emplace_back(3, 3, 0);
  const MeasurementMatrix m = lf_assemble_matrix(random_aperture(g, 1, rng), sh, g);
  for (double v : m.values()) CHECK(v == 0.0);
}

TEST_CASE("capacity cap rejects oversized assemblies") {
  Rng rng(8);
  const LightFieldGeometry g = make_geom(4, 4, 3, 3);
  CHECK_THROWS_AS(
      lf_assemble_matrix(random_aperture(g, 1, rng), random_shutter(g, 1, rng), g, 100),
      CapacityError);
}

TEST_CASE("shape mismatches are rejected") {
  Rng rng(9);
  const LightFieldGeometry g = make_geom(4, 4, 3, 3);
  const LightField lf = test::random_lightfield(g, rng);

  // Aperture without the shear margin.
  ApertureSequence flat;
  flat.slots.push_back(test::random_mask(4, 4, rng));
  CHECK_THROWS_AS(lf_simulate(lf, flat, ones_shutter(g, 1), g), DimensionError);

  // Shutter at the wrong shape.
  ShutterSequence wrong;
  wrong.slots.push_back(test::random_mask(3, 4, rng));
  CHECK_THROWS_AS(lf_simulate(lf, random_aperture(g, 1, rng), wrong, g), DimensionError);

  // Slot count mismatch.
  CHECK_THROWS_AS(lf_simulate(lf, random_aperture(g, 2, rng), ones_shutter(g, 1), g),
                  DimensionError);

  // Even view counts are invalid.
  CHECK_THROWS_AS(make_geom(4, 4, 2, 3).validate(), DimensionError);
}

TEST_CASE("time multiplexing makes pixels angularly selective") {
  // With K >= 2 and a non-constant shutter, some pixel must respond
  // differently to different views; checked across 100 seeds.
  const LightFieldGeometry g = make_geom(4, 4, 3, 3);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(mix_seed(1234, seed));
    const ApertureSequence ap = random_aperture(g, 2, rng);
    ShutterSequence sh = random_shutter(g, 2, rng);
    // Force the shutter to vary over time at at least one pixel.
    sh.slots[0](0, 0) = 1;
    sh.slots[1](0, 0) = 0;
    const EquivalentApertureLF t_hat = lf_equivalent_aperture(ap, sh, g);
    bool selective = false;
    for (int my = 0; my < 4 && !selective; ++my) {
      for (int mx = 0; mx < 4 && !selective; ++mx) {
        const double first = t_hat.at(my, mx, 0, 0);
        for (int vy = 0; vy < 3 && !selective; ++vy) {
          for (int vx = 0; vx < 3 && !selective; ++vx) {
            selective = t_hat.at(my, mx, vy, vx) != first;
          }
        }
      }
    }
    CHECK(selective);
  }
}

TEST_CASE("vectorize and unvectorize round-trip in the documented order") {
  Rng rng(10);
  const LightFieldGeometry g = make_geom(3, 4, 3, 1);
  const LightField lf = test::random_lightfield(g, rng);
  const std::vector<double> v = lf_vectorize(lf);
  // Angular-major: col = ((vy*Ux + vx)*My + my)*Mx + mx.
  CHECK(v[0] == lf.at(0, 0, 0, 0));
  CHECK(v[1] == lf.at(0, 1, 0, 0));
  CHECK(v[12] == lf.at(0, 0, 1, 0));
  const LightField back = lf_from_vector(v, g);
  for (std::size_t i = 0; i < lf.samples.size(); ++i) CHECK(back.samples[i] == lf.samples[i]);
}
