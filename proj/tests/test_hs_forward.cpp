#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tmca/core_model.hpp"
#include "tmca/hs_forward.hpp"
#include "tmca/rng.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace tmca;

namespace {

SpectralConfig make_cfg(int bands, int step = 1) {
  SpectralConfig cfg;
  cfg.bands = bands;
  cfg.dispersion_step = step;
  return cfg;
}

ApertureSequence ones_aperture(Shape2 scene, int k) {
  ApertureSequence ap;
  for (int i = 0; i < k; ++i) ap.slots.emplace_back(scene.rows, scene.cols, 1);
  return ap;
}

ShutterSequence ones_shutter(Shape2 scene, const SpectralConfig& cfg, int k) {
  ShutterSequence sh;
  for (int i = 0; i < k; ++i) {
    sh.slots.emplace_back(scene.rows, cfg.snapshot_cols(scene.cols), 1);
  }
  return sh;
}

ApertureSequence random_aperture(Shape2 scene, int k, Rng& rng) {
  ApertureSequence ap;
  for (int i = 0; i < k; ++i) ap.slots.push_back(test::random_mask(scene.rows, scene.cols, rng));
  return ap;
}

ShutterSequence random_shutter(Shape2 scene, const SpectralConfig& cfg, int k, Rng& rng) {
  ShutterSequence sh;
  for (int i = 0; i < k; ++i) {
    sh.slots.push_back(test::random_mask(scene.rows, cfg.snapshot_cols(scene.cols), rng));
  }
  return sh;
}

}  // namespace

TEST_CASE("single band with open codes is the plain image") {
  Rng rng(1);
  const SpectralCube cube = test::random_cube(4, 6, 1, rng);
  const SpectralConfig cfg = make_cfg(1);
  const Snapshot snap =
      hs_simulate(cube, ones_aperture({4, 6}, 1), ones_shutter({4, 6}, cfg, 1), cfg);
  CHECK(snap.rows() == 4);
  CHECK(snap.cols() == 6);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 6; ++j) CHECK(snap(i, j) == cube.at(i, j, 0));
  }
}

TEST_CASE("a delta voxel lands shifted by its band index") {
  SpectralCube cube(4, 4, 3);
  cube.at(0, 0, 2) = 1.0;
  const SpectralConfig cfg = make_cfg(3);
  const Snapshot snap =
      hs_simulate(cube, ones_aperture({4, 4}, 1), ones_shutter({4, 4}, cfg, 1), cfg);
  CHECK(snap.cols() == 6);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 6; ++j) {
      CHECK(snap(i, j) == ((i == 0 && j == 2) ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("hs_simulate matches the four-loop oracle") {
  Rng rng(2);
  const SpectralCube cube = test::random_cube(5, 5, 3, rng);
  SpectralConfig cfg = make_cfg(3);
  const ApertureSequence ap = random_aperture({5, 5}, 2, rng);
  const ShutterSequence sh = random_shutter({5, 5}, cfg, 2, rng);
  const Snapshot got = hs_simulate(cube, ap, sh, cfg);
  const Snapshot want = test::hs_bruteforce(cube, ap, sh, cfg);
  CHECK(test::max_rel_gap(got.values(), want.values()) < 1e-12);

  SUBCASE("with a non-trivial sensor response and dispersion step") {
    cfg.dispersion_step = 2;
    cfg.sensor_response = {0.9, 0.4, 1.3};
    const ShutterSequence sh2 = random_shutter({5, 5}, cfg, 2, rng);
    const Snapshot got2 = hs_simulate(cube, ap, sh2, cfg);
    const Snapshot want2 = test::hs_bruteforce(cube, ap, sh2, cfg);
    CHECK(got2.cols() == 5 + 2 * 2);
    CHECK(test::max_rel_gap(got2.values(), want2.values()) < 1e-12);
  }
}

TEST_CASE("equivalent aperture reductions") {
  Rng rng(3);
  const Shape2 scene{4, 5};

  SUBCASE("constant shutter: band-independent slot sum") {
    const int k = 3;
    const SpectralConfig cfg = make_cfg(4);
    const ApertureSequence ap = random_aperture(scene, k, rng);
    const EquivalentApertureHS t_hat =
        hs_equivalent_aperture(ap, ones_shutter(scene, cfg, k), cfg);
    for (int i = 0; i < scene.rows; ++i) {
      for (int j = 0; j < scene.cols; ++j) {
        double want = 0.0;
        for (int s = 0; s < k; ++s) want += ap.slots[s](i, j);
        for (int l = 0; l < 4; ++l) {
          CHECK(t_hat.at(i, j, l) == want);
        }
      }
    }
  }

  SUBCASE("open aperture: shutter sampled at band-shifted columns") {
    const int k = 2;
    const SpectralConfig cfg = make_cfg(3);
    const ShutterSequence sh = random_shutter(scene, cfg, k, rng);
    const EquivalentApertureHS t_hat = hs_equivalent_aperture(ones_aperture(scene, k), sh, cfg);
    for (int i = 0; i < scene.rows; ++i) {
      for (int j = 0; j < scene.cols; ++j) {
        for (int l = 0; l < 3; ++l) {
          double want = 0.0;
          for (int s = 0; s < k; ++s) want += sh.slots[s](i, j + l);
          CHECK(t_hat.at(i, j, l) == want);
        }
      }
    }
  }

  SUBCASE("slot-wise and contracted evaluations agree") {
    for (int trial = 0; trial < 10; ++trial) {
      const SpectralConfig cfg = make_cfg(3);
      const SpectralCube cube = test::random_cube(scene.rows, scene.cols, 3, rng);
      const ApertureSequence ap = random_aperture(scene, 3, rng);
      const ShutterSequence sh = random_shutter(scene, cfg, 3, rng);
      const Snapshot direct = hs_simulate(cube, ap, sh, cfg);
      const Snapshot contracted =
          hs_apply_equivalent(hs_equivalent_aperture(ap, sh, cfg), cube, cfg);
      CHECK(test::max_rel_gap(direct.values(), contracted.values()) < 1e-12);
    }
  }
}

TEST_CASE("time multiplexing emulates a color-coded aperture") {
  // With K >= 2 some equivalent-aperture entry is strictly between 0 and K
  // (a non-binary attenuation), and some position responds differently
  // across bands; checked over seeds.
  const Shape2 scene{5, 5};
  const SpectralConfig cfg = make_cfg(3);
  int nonbinary_seeds = 0;
  int color_seeds = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(mix_seed(77, seed));
    const int k = 4;
    const ApertureSequence ap = random_aperture(scene, k, rng);
    const ShutterSequence sh = random_shutter(scene, cfg, k, rng);
    const EquivalentApertureHS t_hat = hs_equivalent_aperture(ap, sh, cfg);
    bool nonbinary = false;
    for (double v : t_hat.values) nonbinary = nonbinary || (v > 0.0 && v < k);
    bool color = false;
    for (int i = 0; i < scene.rows && !color; ++i) {
      for (int j = 0; j < scene.cols && !color; ++j) {
        for (int l = 1; l < 3 && !color; ++l) {
          color = t_hat.at(i, j, l) != t_hat.at(i, j, 0);
        }
      }
    }
    nonbinary_seeds += nonbinary ? 1 : 0;
    color_seeds += color ? 1 : 0;
  }
  CHECK(nonbinary_seeds == 100);
  CHECK(color_seeds == 100);
}

TEST_CASE("snapshot width follows the dispersion span") {
  Rng rng(4);
  const SpectralConfig cfg = make_cfg(4, 2);
  const SpectralCube cube = test::random_cube(3, 5, 4, rng);
  const Snapshot snap = hs_simulate(cube, random_aperture({3, 5}, 1, rng),
                                    random_shutter({3, 5}, cfg, 1, rng), cfg);
  CHECK(snap.cols() == 5 + (4 - 1) * 2);
}

TEST_CASE("assembled matrix reproduces the simulation") {
  Rng rng(5);
  const Shape2 scene{4, 4};
  const SpectralConfig cfg = make_cfg(3);
  const ApertureSequence ap = random_aperture(scene, 2, rng);
  const ShutterSequence sh = random_shutter(scene, cfg, 2, rng);
  const MeasurementMatrix m = hs_assemble_matrix(ap, sh, cfg, scene);
  CHECK(m.rows() == 4 * 6);
  CHECK(m.cols() == 4 * 4 * 3);
  for (double v : m.values()) CHECK(v >= 0.0);

  for (int trial = 0; trial < 20; ++trial) {
    const SpectralCube cube = test::random_cube(4, 4, 3, rng);
    const Snapshot via_matrix = apply_matrix(m, hs_vectorize(cube));
    const Snapshot direct = hs_simulate(cube, ap, sh, cfg);
    CHECK(test::max_rel_gap(via_matrix.values(), direct.values()) < 1e-12);
  }
}

TEST_CASE("single-band open-code matrix is the identity") {
  const Shape2 scene{3, 4};
  const SpectralConfig cfg = make_cfg(1);
  const MeasurementMatrix m =
      hs_assemble_matrix(ones_aperture(scene, 1), ones_shutter(scene, cfg, 1), cfg, scene);
  CHECK(m.rows() == 12);
  CHECK(m.cols() == 12);
  for (int r = 0; r < 12; ++r) {
    for (int c = 0; c < 12; ++c) CHECK(m.at(r, c) == (r == c ? 1.0 : 0.0));
  }
}

TEST_CASE("blocked aperture assembles the zero matrix") {
  Rng rng(6);
  const Shape2 scene{3, 3};
  const SpectralConfig cfg = make_cfg(2);
  ApertureSequence ap;
  ap.slots.emplace_back(3, 3, 0);
  const MeasurementMatrix m =
      hs_assemble_matrix(ap, random_shutter(scene, cfg, 1, rng), cfg, scene);
  for (double v : m.values()) CHECK(v == 0.0);
}

TEST_CASE("kappa scales per-band contributions consistently in all paths") {
  Rng rng(7);
  const Shape2 scene{4, 4};
  SpectralConfig cfg = make_cfg(3);
  cfg.sensor_response = {0.5, 1.0, 2.0};
  const SpectralCube cube = test::random_cube(4, 4, 3, rng);
  const ApertureSequence ap = random_aperture(scene, 2, rng);
  const ShutterSequence sh = random_shutter(scene, cfg, 2, rng);
  const Snapshot direct = hs_simulate(cube, ap, sh, cfg);
  const Snapshot contracted = hs_apply_equivalent(hs_equivalent_aperture(ap, sh, cfg), cube, cfg);
  const Snapshot via_matrix = apply_matrix(hs_assemble_matrix(ap, sh, cfg, scene),
                                           hs_vectorize(cube));
  CHECK(test::max_rel_gap(direct.values(), contracted.values()) < 1e-12);
  CHECK(test::max_rel_gap(direct.values(), via_matrix.values()) < 1e-12);
}

TEST_CASE("dimension and capacity errors") {
  Rng rng(8);
  const Shape2 scene{4, 4};
  const SpectralConfig cfg = make_cfg(3);
  const SpectralCube cube = test::random_cube(4, 4, 3, rng);

  // Shutter at the scene shape instead of the dispersed sensor shape.
  ShutterSequence narrow;
  narrow.slots.push_back(test::random_mask(4, 4, rng));
  CHECK_THROWS_AS(hs_simulate(cube, random_aperture(scene, 1, rng), narrow, cfg), DimensionError);

  // Band mismatch between cube and config.
  const SpectralConfig cfg2 = make_cfg(2);
  CHECK_THROWS_AS(hs_simulate(cube, random_aperture(scene, 1, rng),
                              random_shutter(scene, cfg2, 1, rng), cfg2),
                  DimensionError);

  // Negative kappa.
  SpectralConfig bad = make_cfg(3);
  bad.sensor_response = {1.0, -0.5, 1.0};
  CHECK_THROWS_AS(bad.validate(), InvalidInputError);

  CHECK_THROWS_AS(hs_assemble_matrix(random_aperture(scene, 1, rng),
                                     random_shutter(scene, cfg, 1, rng), cfg, scene, 10),
                  CapacityError);
}

TEST_CASE("vectorize round-trips in the documented band-major order") {
  Rng rng(9);
  const SpectralCube cube = test::random_cube(3, 4, 2, rng);
  const std::vector<double> v = hs_vectorize(cube);
  // col = (l*M + i)*N + j.
  CHECK(v[0] == cube.at(0, 0, 0));
  CHECK(v[1] == cube.at(0, 1, 0));
  CHECK(v[12] == cube.at(0, 0, 1));
  const SpectralCube back = hs_from_vector(v, {3, 4}, 2);
  for (std::size_t i = 0; i < cube.voxels.size(); ++i) CHECK(back.voxels[i] == cube.voxels[i]);
}
