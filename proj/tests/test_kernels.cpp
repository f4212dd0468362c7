#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "tmca/kernels.hpp"
#include "tmca/linalg.hpp"
#include "tmca/parallel.hpp"
#include "tmca/rng.hpp"
#include "testutil.hpp"

using namespace tmca;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace

TEST_CASE("dispatched kernels match the scalar reference") {
  Rng rng(42);
  // Lengths straddle the vector width so remainders get exercised.
  for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 64, 1000, 1003}) {
    const std::vector<double> x = random_vec(n, rng);
    const std::vector<double> y = random_vec(n, rng);

    const double d_ref = kernels::scalar::dot(x, y);
    const double d_got = kernels::dot(x, y);
    CHECK(test::close(d_got, d_ref, 1e-13));

    std::vector<double> ya = y;
    std::vector<double> yb = y;
    kernels::scalar::axpy(0.37, x, ya);
    kernels::axpy(0.37, x, yb);
    CHECK(test::max_rel_gap(ya, yb) < 1e-14);

    std::vector<double> sa(n), sb(n);
    kernels::scalar::soft_threshold(x, 0.25, sa);
    kernels::soft_threshold(x, 0.25, sb);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(sa[i] == sb[i]);  // compare / subtract / max only: bitwise equal
    }
  }
}

TEST_CASE("soft threshold shrinks toward zero with correct signs") {
  const std::vector<double> z = {-1.5, -0.2, 0.0, 0.2, 1.5};
  std::vector<double> out(z.size());
  kernels::soft_threshold(z, 0.5, out);
  CHECK(out[0] == doctest::Approx(-1.0));
  CHECK(out[1] == 0.0);
  CHECK(out[2] == 0.0);
  CHECK(out[3] == 0.0);
  CHECK(out[4] == doctest::Approx(1.0));
}

TEST_CASE("matvec and its transpose are consistent with naive loops") {
  Rng rng(7);
  const int rows = 13;
  const int cols = 29;
  const std::vector<double> a = random_vec(static_cast<std::size_t>(rows) * cols, rng);
  const std::vector<double> x = random_vec(cols, rng);
  const std::vector<double> y = random_vec(rows, rng);

  std::vector<double> ax(rows, 0.0);
  linalg::matvec(a, rows, cols, x, ax);
  for (int r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (int c = 0; c < cols; ++c) acc += a[static_cast<std::size_t>(r) * cols + c] * x[c];
    CHECK(test::close(ax[r], acc, 1e-13));
  }

  std::vector<double> aty(cols, 0.0);
  linalg::matvec_transpose(a, rows, cols, y, aty);
  for (int c = 0; c < cols; ++c) {
    double acc = 0.0;
    for (int r = 0; r < rows; ++r) acc += a[static_cast<std::size_t>(r) * cols + c] * y[r];
    CHECK(test::close(aty[c], acc, 1e-13));
  }
}

TEST_CASE("matvec results do not depend on the thread cap") {
  Rng rng(11);
  const int rows = 37;
  const int cols = 53;
  const std::vector<double> a = random_vec(static_cast<std::size_t>(rows) * cols, rng);
  const std::vector<double> x = random_vec(cols, rng);

  set_max_threads(1);
  std::vector<double> y1(rows, 0.0);
  linalg::matvec(a, rows, cols, x, y1);
  set_max_threads(4);
  std::vector<double> y4(rows, 0.0);
  linalg::matvec(a, rows, cols, x, y4);
  set_max_threads(0);

  for (int r = 0; r < rows; ++r) {
    CHECK(y1[r] == y4[r]);  // fixed per-row order: bitwise equal
  }
}

TEST_CASE("active backend is reported") {
  const char* name = kernels::backend_name(kernels::active_backend());
  CHECK(name != nullptr);
  MESSAGE("kernel backend: ", std::string(name));
}
