#pragma once

#include <functional>
#include <span>
#include <vector>

#include "tmca/system.hpp"
#include "tmca/types.hpp"

// Classical reconstruction of a vectorized scene x from a coded snapshot e:
//
//   minimize  0.5 * ||M x - e||^2 + tau * TV(x)
//
// with anisotropic total variation over the spatial axes of each channel
// (band or view), solved by scaled-form ADMM with the splitting z = D x.
// The x-update solves the normal equations (M^T M + rho D^T D) x = rhs by
// conjugate gradient, warm-started from the previous iterate.

namespace tmca {

struct AdmmConfig {
  /// TV weight tau; negative selects the default 0.01 * ||M^T e||_inf.
  double tv_weight = -1.0;
  double rho = 1.0;
  int max_iters = 300;
  double abs_tol = 1e-5;
  double rel_tol = 1e-5;
  int cg_max_iters = 100;
  double cg_tol = 1e-10;

  void validate() const;
};

struct AdmmIterStats {
  int iteration = 0;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

using AdmmLogger = std::function<void(const AdmmIterStats&)>;

struct ReconResult {
  /// Best iterate by objective value, in the scene vector layout.
  std::vector<double> estimate;
  std::vector<double> objective_trace;
  std::vector<double> primal_residuals;
  std::vector<double> dual_residuals;
  int iterations_used = 0;
  bool converged = false;
  double tv_weight_used = 0.0;
};

/// Transpose back-projection M^T e (the classical lifting of a snapshot
/// into the scene domain).
std::vector<double> backproject(const MeasurementMatrix& matrix, const Snapshot& snapshot);

/// Elementwise soft-thresholding of difference coefficients:
/// sign(z) * max(|z| - threshold, 0).
std::vector<double> tv_prox(std::span<const double> coeffs, double threshold);

ReconResult admm_tv(const MeasurementMatrix& matrix, const Snapshot& snapshot,
                    const AdmmConfig& config, const SceneLayout& layout,
                    std::span<const double> initial = {}, const AdmmLogger& logger = nullptr);

/// 0.5*||Mx - e||^2 + tau*TV(x); exposed for tests and drivers.
double admm_objective(const MeasurementMatrix& matrix, const Snapshot& snapshot, double tv_weight,
                      const SceneLayout& layout, std::span<const double> x);

}  // namespace tmca
