#include "tmca/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>

#include "tmca/errors.hpp"
#include "tmca/kernels.hpp"
#include "tmca/parallel.hpp"

namespace tmca::linalg {

void matvec(std::span<const double> a, int rows, int cols, std::span<const double> x,
            std::span<double> y) {
  assert(a.size() == static_cast<std::size_t>(rows) * cols);
  assert(x.size() == static_cast<std::size_t>(cols));
  assert(y.size() == static_cast<std::size_t>(rows));
  parallel_for(0, rows, [&](int r) {
    y[static_cast<std::size_t>(r)] =
        kernels::dot(a.subspan(static_cast<std::size_t>(r) * cols, cols), x);
  });
}

void matvec_transpose(std::span<const double> a, int rows, int cols, std::span<const double> x,
                      std::span<double> y) {
  assert(a.size() == static_cast<std::size_t>(rows) * cols);
  assert(x.size() == static_cast<std::size_t>(rows));
  assert(y.size() == static_cast<std::size_t>(cols));
  std::fill(y.begin(), y.end(), 0.0);
  for (int r = 0; r < rows; ++r) {
    kernels::axpy(x[static_cast<std::size_t>(r)],
                  a.subspan(static_cast<std::size_t>(r) * cols, cols), y);
  }
}

void gram(std::span<const double> a, int rows, int cols, std::span<double> g) {
  assert(g.size() == static_cast<std::size_t>(cols) * cols);
  std::fill(g.begin(), g.end(), 0.0);
  // Rank-1 accumulation: G += row^T row, vectorized along the row.
  for (int r = 0; r < rows; ++r) {
    const auto row = a.subspan(static_cast<std::size_t>(r) * cols, cols);
    for (int i = 0; i < cols; ++i) {
      if (row[static_cast<std::size_t>(i)] != 0.0) {
        kernels::axpy(row[static_cast<std::size_t>(i)], row,
                      g.subspan(static_cast<std::size_t>(i) * cols, cols));
      }
    }
  }
}

void gram_right(std::span<const double> a, int rows, int cols, std::span<double> g) {
  assert(g.size() == static_cast<std::size_t>(rows) * rows);
  parallel_for(0, rows, [&](int i) {
    const auto ri = a.subspan(static_cast<std::size_t>(i) * cols, cols);
    for (int j = 0; j <= i; ++j) {
      const double v = kernels::dot(ri, a.subspan(static_cast<std::size_t>(j) * cols, cols));
      g[static_cast<std::size_t>(i) * rows + j] = v;
    }
  });
  for (int i = 0; i < rows; ++i) {
    for (int j = i + 1; j < rows; ++j) {
      g[static_cast<std::size_t>(i) * rows + j] = g[static_cast<std::size_t>(j) * rows + i];
    }
  }
}

double norm2(std::span<const double> x) { return std::sqrt(kernels::dot(x, x)); }

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::fabs(v));
  return m;
}

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form
// (diagonal d, subdiagonal e). Same recurrences as the EISPACK tred2
// routine restricted to eigenvalues only.
void tridiagonalize(std::vector<double>& m, int n, std::vector<double>& d,
                    std::vector<double>& e) {
  auto at = [&](int i, int j) -> double& { return m[static_cast<std::size_t>(i) * n + j]; };
  d.assign(static_cast<std::size_t>(n), 0.0);
  e.assign(static_cast<std::size_t>(n), 0.0);

  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (int k = 0; k <= l; ++k) scale += std::fabs(at(i, k));
      if (scale == 0.0) {
        e[static_cast<std::size_t>(i)] = at(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          at(i, k) /= scale;
          h += at(i, k) * at(i, k);
        }
        double f = at(i, l);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[static_cast<std::size_t>(i)] = scale * g;
        h -= f * g;
        at(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
          for (int k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
          e[static_cast<std::size_t>(j)] = g / h;
          f += e[static_cast<std::size_t>(j)] * at(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = at(i, j);
          g = e[static_cast<std::size_t>(j)] - hh * f;
          e[static_cast<std::size_t>(j)] = g;
          for (int k = 0; k <= j; ++k) {
            at(j, k) -= f * e[static_cast<std::size_t>(k)] + g * at(i, k);
          }
        }
      }
    } else {
      e[static_cast<std::size_t>(i)] = at(i, l);
    }
    d[static_cast<std::size_t>(i)] = h;
  }
  for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = at(i, i);
}

// Implicit-shift QL on a tridiagonal matrix; eigenvalues land in d.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, int n) {
  if (n <= 1) return;
  for (int i = 1; i < n; ++i) e[static_cast<std::size_t>(i - 1)] = e[static_cast<std::size_t>(i)];
  e[static_cast<std::size_t>(n - 1)] = 0.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[static_cast<std::size_t>(m)]) +
                          std::fabs(d[static_cast<std::size_t>(m + 1)]);
        if (std::fabs(e[static_cast<std::size_t>(m)]) <= 1e-300 ||
            std::fabs(e[static_cast<std::size_t>(m)]) <= 2.3e-16 * dd) {
          break;
        }
      }
      if (m != l) {
        if (++iter == 50) throw SolverError("sym_eigenvalues: QL sweep did not converge");
        double g = (d[static_cast<std::size_t>(l + 1)] - d[static_cast<std::size_t>(l)]) /
                   (2.0 * e[static_cast<std::size_t>(l)]);
        double r = std::hypot(g, 1.0);
        g = d[static_cast<std::size_t>(m)] - d[static_cast<std::size_t>(l)] +
            e[static_cast<std::size_t>(l)] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[static_cast<std::size_t>(i)];
          const double b = c * e[static_cast<std::size_t>(i)];
          r = std::hypot(f, g);
          e[static_cast<std::size_t>(i + 1)] = r;
          if (r == 0.0) {
            // Deflation mid-sweep: drop the shift and restart this block.
            d[static_cast<std::size_t>(i + 1)] -= p;
            e[static_cast<std::size_t>(m)] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[static_cast<std::size_t>(i + 1)] - p;
          r = (d[static_cast<std::size_t>(i)] - g) * s + 2.0 * c * b;
          p = s * r;
          d[static_cast<std::size_t>(i + 1)] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[static_cast<std::size_t>(l)] -= p;
        e[static_cast<std::size_t>(l)] = g;
        e[static_cast<std::size_t>(m)] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

std::vector<double> sym_eigenvalues(std::span<const double> m, int n) {
  assert(m.size() == static_cast<std::size_t>(n) * n);
  std::vector<double> work(m.begin(), m.end());
  std::vector<double> d;
  std::vector<double> e;
  tridiagonalize(work, n, d, e);
  ql_implicit(d, e, n);
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace tmca::linalg
