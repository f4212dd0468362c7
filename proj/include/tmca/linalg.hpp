#pragma once

#include <span>
#include <vector>

namespace tmca::linalg {

/// y = A x for row-major A (rows x cols). Parallel over rows; each row is a
/// single kernel dot, so the per-row summation order is fixed.
void matvec(std::span<const double> a, int rows, int cols, std::span<const double> x,
            std::span<double> y);

/// y = A^T x. Accumulates row-by-row with axpy, so every output component
/// sums contributions in ascending row order.
void matvec_transpose(std::span<const double> a, int rows, int cols, std::span<const double> x,
                      std::span<double> y);

/// g = A^T A (cols x cols, row-major, symmetric).
void gram(std::span<const double> a, int rows, int cols, std::span<double> g);

/// g = A A^T (rows x rows).
void gram_right(std::span<const double> a, int rows, int cols, std::span<double> g);

double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);

/// Eigenvalues of a symmetric matrix (row-major, n x n), ascending.
/// Householder tridiagonalization followed by the implicit-shift QL sweep.
/// Throws SolverError if a QL eigenvalue fails to converge.
std::vector<double> sym_eigenvalues(std::span<const double> m, int n);

}  // namespace tmca::linalg
