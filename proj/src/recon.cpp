#include "tmca/recon.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tmca/core_model.hpp"
#include "tmca/kernels.hpp"
#include "tmca/linalg.hpp"

namespace tmca {

void AdmmConfig::validate() const {
  if (!(rho > 0.0)) throw InvalidInputError("AdmmConfig: rho must be > 0");
  if (max_iters < 1) throw InvalidInputError("AdmmConfig: max_iters must be >= 1");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw InvalidInputError("AdmmConfig: tolerances must be > 0");
  }
  if (cg_max_iters < 1 || !(cg_tol > 0.0)) {
    throw InvalidInputError("AdmmConfig: invalid CG settings");
  }
}

namespace {

// Forward differences along both spatial axes of every channel plane.
// Coefficient layout per channel: (rows-1)*cols vertical diffs followed by
// rows*(cols-1) horizontal diffs.
struct TvOperator {
  Shape2 spatial;
  int channels = 1;

  std::int64_t plane() const { return static_cast<std::int64_t>(spatial.rows) * spatial.cols; }
  std::int64_t coeffs_per_channel() const {
    return static_cast<std::int64_t>(spatial.rows - 1) * spatial.cols +
           static_cast<std::int64_t>(spatial.rows) * (spatial.cols - 1);
  }
  std::int64_t coeff_dim() const { return coeffs_per_channel() * channels; }

  void apply(std::span<const double> x, std::span<double> z) const {
    const int rows = spatial.rows;
    const int cols = spatial.cols;
    std::size_t zi = 0;
    for (int ch = 0; ch < channels; ++ch) {
      const double* p = x.data() + ch * plane();
      for (int r = 0; r + 1 < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          z[zi++] = p[(r + 1) * cols + c] - p[r * cols + c];
        }
      }
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c + 1 < cols; ++c) {
          z[zi++] = p[r * cols + c + 1] - p[r * cols + c];
        }
      }
    }
  }

  void apply_transpose(std::span<const double> z, std::span<double> x) const {
    const int rows = spatial.rows;
    const int cols = spatial.cols;
    std::fill(x.begin(), x.end(), 0.0);
    std::size_t zi = 0;
    for (int ch = 0; ch < channels; ++ch) {
      double* p = x.data() + ch * plane();
      for (int r = 0; r + 1 < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          const double v = z[zi++];
          p[(r + 1) * cols + c] += v;
          p[r * cols + c] -= v;
        }
      }
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c + 1 < cols; ++c) {
          const double v = z[zi++];
          p[r * cols + c + 1] += v;
          p[r * cols + c] -= v;
        }
      }
    }
  }

  double tv_norm(std::span<const double> x, std::vector<double>& scratch) const {
    apply(x, scratch);
    double acc = 0.0;
    for (double v : scratch) acc += std::fabs(v);
    return acc;
  }
};

bool finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

std::vector<double> backproject(const MeasurementMatrix& matrix, const Snapshot& snapshot) {
  return apply_adjoint(matrix, snapshot);
}

std::vector<double> tv_prox(std::span<const double> coeffs, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidInputError("tv_prox: threshold must be >= 0");
  std::vector<double> out(coeffs.size());
  kernels::soft_threshold(coeffs, threshold, out);
  return out;
}

double admm_objective(const MeasurementMatrix& matrix, const Snapshot& snapshot, double tv_weight,
                      const SceneLayout& layout, std::span<const double> x) {
  const TvOperator tv{layout.spatial, layout.channels};
  std::vector<double> residual(static_cast<std::size_t>(matrix.rows()), 0.0);
  linalg::matvec(matrix.values(), matrix.rows(), matrix.cols(), x, residual);
  const auto e = snapshot.values();
  double fit = 0.0;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    const double d = residual[i] - e[i];
    fit += d * d;
  }
  std::vector<double> scratch(static_cast<std::size_t>(tv.coeff_dim()), 0.0);
  return 0.5 * fit + tv_weight * tv.tv_norm(x, scratch);
}

ReconResult admm_tv(const MeasurementMatrix& matrix, const Snapshot& snapshot,
                    const AdmmConfig& config, const SceneLayout& layout,
                    std::span<const double> initial, const AdmmLogger& logger) {
  config.validate();
  if (snapshot.shape() != matrix.sensor_shape()) {
    throw DimensionError("admm_tv: snapshot shape does not match matrix sensor shape");
  }
  if (layout.dim() != matrix.cols()) {
    throw DimensionError("admm_tv: scene layout does not match matrix columns");
  }
  if (layout.spatial.rows < 1 || layout.spatial.cols < 1 || layout.channels < 1) {
    throw DimensionError("admm_tv: degenerate scene layout");
  }

  const std::size_t n = static_cast<std::size_t>(matrix.cols());
  const TvOperator tv{layout.spatial, layout.channels};
  const std::size_t zn = static_cast<std::size_t>(tv.coeff_dim());
  const double rho = config.rho;

  std::vector<double> mte(n, 0.0);
  linalg::matvec_transpose(matrix.values(), matrix.rows(), matrix.cols(), snapshot.values(), mte);
  // Negative tv_weight selects the default scale; an explicit 0 stays 0.
  const double tau =
      config.tv_weight >= 0.0 ? config.tv_weight : 0.01 * linalg::norm_inf(mte);

  std::vector<double> x(n, 0.0);
  if (!initial.empty()) {
    if (initial.size() != n) throw DimensionError("admm_tv: initial guess has wrong length");
    std::copy(initial.begin(), initial.end(), x.begin());
  }

  std::vector<double> dx(zn, 0.0);
  tv.apply(x, dx);
  std::vector<double> z = dx;
  std::vector<double> u(zn, 0.0);

  // CG scratch.
  std::vector<double> rhs(n, 0.0);
  std::vector<double> r(n, 0.0);
  std::vector<double> p(n, 0.0);
  std::vector<double> ap(n, 0.0);
  std::vector<double> m_p(static_cast<std::size_t>(matrix.rows()), 0.0);
  std::vector<double> dtd(n, 0.0);
  std::vector<double> zscratch(zn, 0.0);

  auto apply_normal = [&](std::span<const double> v, std::span<double> out) {
    // out = (M^T M + rho D^T D) v
    linalg::matvec(matrix.values(), matrix.rows(), matrix.cols(), v, m_p);
    linalg::matvec_transpose(matrix.values(), matrix.rows(), matrix.cols(), m_p, out);
    tv.apply(v, zscratch);
    tv.apply_transpose(zscratch, dtd);
    kernels::axpy(rho, dtd, out);
  };

  ReconResult result;
  result.tv_weight_used = tau;
  std::vector<double> best_x = x;
  double best_obj = admm_objective(matrix, snapshot, tau, layout, x);

  std::vector<double> z_prev(zn, 0.0);
  std::vector<double> diff(zn, 0.0);

  for (int it = 0; it < config.max_iters; ++it) {
    // x-update: CG on the normal equations, warm-started at the current x.
    for (std::size_t i = 0; i < n; ++i) rhs[i] = mte[i];
    for (std::size_t i = 0; i < zn; ++i) zscratch[i] = z[i] - u[i];
    tv.apply_transpose(zscratch, dtd);
    kernels::axpy(rho, dtd, rhs);

    apply_normal(x, ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ap[i];
    p = r;
    double rho_cg = kernels::dot(r, r);
    const double rhs_norm = std::max(1.0, linalg::norm2(rhs));
    for (int cg = 0; cg < config.cg_max_iters && std::sqrt(rho_cg) > config.cg_tol * rhs_norm;
         ++cg) {
      apply_normal(p, ap);
      const double denom = kernels::dot(p, ap);
      if (denom <= 0.0) break;
      const double alpha = rho_cg / denom;
      kernels::axpy(alpha, p, x);
      kernels::axpy(-alpha, ap, r);
      const double rho_next = kernels::dot(r, r);
      const double beta = rho_next / rho_cg;
      rho_cg = rho_next;
      for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }

    // z-update: soft threshold, then the scaled dual ascent.
    z_prev = z;
    tv.apply(x, dx);
    for (std::size_t i = 0; i < zn; ++i) zscratch[i] = dx[i] + u[i];
    kernels::soft_threshold(zscratch, tau / rho, z);
    for (std::size_t i = 0; i < zn; ++i) u[i] += dx[i] - z[i];

    double r_primal = 0.0;
    for (std::size_t i = 0; i < zn; ++i) {
      const double d = dx[i] - z[i];
      r_primal += d * d;
    }
    r_primal = std::sqrt(r_primal);
    for (std::size_t i = 0; i < zn; ++i) diff[i] = z[i] - z_prev[i];
    tv.apply_transpose(diff, dtd);
    const double r_dual = rho * linalg::norm2(dtd);

    const double objective = admm_objective(matrix, snapshot, tau, layout, x);
    if (!std::isfinite(objective) || !finite(x)) {
      throw SolverError("admm_tv: non-finite iterate at iteration " + std::to_string(it + 1));
    }

    result.objective_trace.push_back(objective);
    result.primal_residuals.push_back(r_primal);
    result.dual_residuals.push_back(r_dual);
    result.iterations_used = it + 1;
    if (objective < best_obj) {
      best_obj = objective;
      best_x = x;
    }
    if (logger) {
      logger(AdmmIterStats{it + 1, objective, r_primal, r_dual});
    }

    const double eps_primal =
        std::sqrt(static_cast<double>(zn)) * config.abs_tol +
        config.rel_tol * std::max(linalg::norm2(dx), linalg::norm2(z));
    tv.apply_transpose(u, dtd);
    const double eps_dual = std::sqrt(static_cast<double>(n)) * config.abs_tol +
                            config.rel_tol * rho * linalg::norm2(dtd);
    if (r_primal <= eps_primal && r_dual <= eps_dual) {
      result.converged = true;
      break;
    }
  }

  result.estimate = std::move(best_x);
  return result;
}

}  // namespace tmca
