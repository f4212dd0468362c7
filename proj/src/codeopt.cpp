#include "tmca/codeopt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tmca/core_model.hpp"
#include "tmca/kernels.hpp"
#include "tmca/linalg.hpp"
#include "tmca/rng.hpp"

namespace tmca {

namespace {

constexpr double kNormEps = 1e-12;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// One scene voxel = one matrix column; it hits a single sensor row with
// weight kappa * sum_k shutter_k[row] * aperture_k[ap_index]. Both systems
// share this shape, so assembly and backprop run off this table.
struct ColumnWiring {
  int row = 0;
  int aperture_index = 0;
  double kappa = 1.0;
};

struct Circuit {
  Shape2 aperture_shape;
  Shape2 shutter_shape;
  std::vector<ColumnWiring> columns;  // indexed by matrix column
};

Circuit build_circuit(const SystemDims& dims) {
  Circuit circuit;
  const auto [ap_shape, sh_shape] = code_shapes(dims);
  circuit.aperture_shape = ap_shape;
  circuit.shutter_shape = sh_shape;
  circuit.columns.resize(static_cast<std::size_t>(scene_dim(dims)));
  if (const auto* lf = std::get_if<LfSystemDims>(&dims)) {
    const auto& g = lf->geometry;
    g.validate();
    std::size_t col = 0;
    for (int vy = 0; vy < g.views_y; ++vy) {
      for (int vx = 0; vx < g.views_x; ++vx) {
        for (int my = 0; my < g.sensor.rows; ++my) {
          for (int mx = 0; mx < g.sensor.cols; ++mx) {
            ColumnWiring& w = circuit.columns[col++];
            w.row = my * g.sensor.cols + mx;
            w.aperture_index =
                (my + g.shear_step * vy) * ap_shape.cols + (mx + g.shear_step * vx);
            w.kappa = 1.0;
          }
        }
      }
    }
  } else {
    const auto& hs = std::get<HsSystemDims>(dims);
    hs.spectral.validate();
    std::size_t col = 0;
    for (int l = 0; l < hs.spectral.bands; ++l) {
      for (int i = 0; i < hs.scene_spatial.rows; ++i) {
        for (int j = 0; j < hs.scene_spatial.cols; ++j) {
          ColumnWiring& w = circuit.columns[col++];
          w.row = i * sh_shape.cols + (j + l * hs.spectral.dispersion_step);
          w.aperture_index = i * hs.scene_spatial.cols + j;
          w.kappa = hs.spectral.kappa(l);
        }
      }
    }
  }
  return circuit;
}

std::vector<Image> relaxed_values(const std::vector<Image>& logits, double beta) {
  std::vector<Image> out;
  out.reserve(logits.size());
  for (const auto& l : logits) {
    Image v(l.rows(), l.cols());
    auto src = l.values();
    auto dst = v.values();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = sigmoid(beta * src[i]);
    out.push_back(std::move(v));
  }
  return out;
}

MeasurementMatrix assemble_from_values(const Circuit& circuit, Shape2 sensor,
                                       const std::vector<Image>& aperture,
                                       const std::vector<Image>& shutter,
                                       std::int64_t max_entries) {
  const std::int64_t rows = static_cast<std::int64_t>(sensor.rows) * sensor.cols;
  const std::int64_t cols = static_cast<std::int64_t>(circuit.columns.size());
  if (rows * cols > max_entries) {
    throw CapacityError("relaxed_matrix: " + std::to_string(rows * cols) + " entries exceed cap " +
                        std::to_string(max_entries));
  }
  MeasurementMatrix m(static_cast<int>(rows), static_cast<int>(cols), sensor);
  const int num_slots = static_cast<int>(aperture.size());
  for (std::size_t c = 0; c < circuit.columns.size(); ++c) {
    const ColumnWiring& w = circuit.columns[c];
    double acc = 0.0;
    for (int k = 0; k < num_slots; ++k) {
      acc += shutter[static_cast<std::size_t>(k)].values()[static_cast<std::size_t>(w.row)] *
             aperture[static_cast<std::size_t>(k)].values()[static_cast<std::size_t>(w.aperture_index)];
    }
    m.at(w.row, static_cast<int>(c)) = w.kappa * acc;
  }
  return m;
}

void check_finite(const std::vector<Image>& logits, const char* what) {
  for (const auto& l : logits) {
    for (double v : l.values()) {
      if (!std::isfinite(v)) throw InvalidInputError(std::string(what) + ": non-finite logit");
    }
  }
}

double gram_identity_value(const MeasurementMatrix& m, std::vector<double>* deficit_out) {
  const int cols = m.cols();
  std::vector<double> g(static_cast<std::size_t>(cols) * cols, 0.0);
  linalg::gram(m.values(), m.rows(), cols, g);
  for (int i = 0; i < cols; ++i) g[static_cast<std::size_t>(i) * cols + i] -= 1.0;
  double value = 0.0;
  for (double v : g) value += v * v;
  if (deficit_out != nullptr) *deficit_out = std::move(g);
  return value;
}

double coherence_softmax_value(const MeasurementMatrix& m, double gamma,
                               std::vector<double>* gram_out, std::vector<double>* norms_out) {
  const int cols = m.cols();
  std::vector<double> g(static_cast<std::size_t>(cols) * cols, 0.0);
  linalg::gram(m.values(), m.rows(), cols, g);
  std::vector<double> norms(static_cast<std::size_t>(cols), 0.0);
  for (int i = 0; i < cols; ++i) {
    norms[static_cast<std::size_t>(i)] =
        std::sqrt(std::max(g[static_cast<std::size_t>(i) * cols + i], 0.0)) + kNormEps;
  }
  double max_u = 0.0;
  for (int p = 0; p < cols; ++p) {
    for (int q = p + 1; q < cols; ++q) {
      const double u = std::fabs(g[static_cast<std::size_t>(p) * cols + q]) /
                       (norms[static_cast<std::size_t>(p)] * norms[static_cast<std::size_t>(q)]);
      max_u = std::max(max_u, u);
    }
  }
  double acc = 0.0;
  for (int p = 0; p < cols; ++p) {
    for (int q = p + 1; q < cols; ++q) {
      const double u = std::fabs(g[static_cast<std::size_t>(p) * cols + q]) /
                       (norms[static_cast<std::size_t>(p)] * norms[static_cast<std::size_t>(q)]);
      acc += std::exp(gamma * (u - max_u));
    }
  }
  if (gram_out != nullptr) *gram_out = std::move(g);
  if (norms_out != nullptr) *norms_out = std::move(norms);
  return max_u + std::log(acc) / gamma;
}

}  // namespace

void CodeParams::validate(const SystemDims& dims) const {
  if (!(sigmoid_beta > 0.0)) throw InvalidInputError("CodeParams: sigmoid_beta must be > 0");
  if (aperture_logits.empty() || aperture_logits.size() != shutter_logits.size()) {
    throw DimensionError("CodeParams: aperture/shutter slot counts differ or are zero");
  }
  const auto [ap_shape, sh_shape] = code_shapes(dims);
  for (const auto& l : aperture_logits) {
    if (l.shape() != ap_shape) throw DimensionError("CodeParams: aperture logit shape mismatch");
  }
  for (const auto& l : shutter_logits) {
    if (l.shape() != sh_shape) throw DimensionError("CodeParams: shutter logit shape mismatch");
  }
  check_finite(aperture_logits, "CodeParams");
  check_finite(shutter_logits, "CodeParams");
}

MeasurementMatrix relaxed_matrix(const CodeParams& params, const SystemDims& dims,
                                 std::int64_t max_entries) {
  params.validate(dims);
  const Circuit circuit = build_circuit(dims);
  return assemble_from_values(circuit, sensor_shape(dims),
                              relaxed_values(params.aperture_logits, params.sigmoid_beta),
                              relaxed_values(params.shutter_logits, params.sigmoid_beta),
                              max_entries);
}

double objective_value(const SurrogateObjective& objective, const MeasurementMatrix& matrix) {
  switch (objective.kind) {
    case SurrogateKind::gram_identity:
      return gram_identity_value(matrix, nullptr);
    case SurrogateKind::coherence_softmax:
      return coherence_softmax_value(matrix, objective.softmax_sharpness, nullptr, nullptr);
  }
  throw InvalidInputError("objective_value: unknown kind");
}

std::pair<double, std::vector<double>> objective_matrix_gradient(
    const SurrogateObjective& objective, const MeasurementMatrix& matrix) {
  const int rows = matrix.rows();
  const int cols = matrix.cols();
  std::vector<double> grad(static_cast<std::size_t>(rows) * cols, 0.0);

  if (objective.kind == SurrogateKind::gram_identity) {
    std::vector<double> deficit;  // G - I, symmetric
    const double value = gram_identity_value(matrix, &deficit);
    // dF/dM = 4 M (G - I), accumulated row by row.
    for (int r = 0; r < rows; ++r) {
      const auto m_row = matrix.row(r);
      auto g_row = std::span<double>(grad).subspan(static_cast<std::size_t>(r) * cols, cols);
      for (int q = 0; q < cols; ++q) {
        const double coeff = 4.0 * m_row[static_cast<std::size_t>(q)];
        if (coeff != 0.0) {
          kernels::axpy(coeff,
                        std::span<const double>(deficit).subspan(
                            static_cast<std::size_t>(q) * cols, cols),
                        g_row);
        }
      }
    }
    return {value, std::move(grad)};
  }

  // coherence_softmax
  const double gamma = objective.softmax_sharpness;
  std::vector<double> g;
  std::vector<double> norms;
  const double value = coherence_softmax_value(matrix, gamma, &g, &norms);
  const auto mv = matrix.values();

  // Softmax weights need a second pass; recompute u_pq against the max
  // embedded in `value` via the same stabilization.
  double max_u = 0.0;
  for (int p = 0; p < cols; ++p) {
    for (int q = p + 1; q < cols; ++q) {
      const double u = std::fabs(g[static_cast<std::size_t>(p) * cols + q]) /
                       (norms[static_cast<std::size_t>(p)] * norms[static_cast<std::size_t>(q)]);
      max_u = std::max(max_u, u);
    }
  }
  double denom = 0.0;
  for (int p = 0; p < cols; ++p) {
    for (int q = p + 1; q < cols; ++q) {
      const double u = std::fabs(g[static_cast<std::size_t>(p) * cols + q]) /
                       (norms[static_cast<std::size_t>(p)] * norms[static_cast<std::size_t>(q)]);
      denom += std::exp(gamma * (u - max_u));
    }
  }

  for (int p = 0; p < cols; ++p) {
    const double np = norms[static_cast<std::size_t>(p)];
    const double raw_np = np - kNormEps;
    for (int q = p + 1; q < cols; ++q) {
      const double nq = norms[static_cast<std::size_t>(q)];
      const double gpq = g[static_cast<std::size_t>(p) * cols + q];
      const double u = std::fabs(gpq) / (np * nq);
      const double weight = std::exp(gamma * (u - max_u)) / denom;
      if (weight == 0.0) continue;
      const double sign = gpq > 0.0 ? 1.0 : (gpq < 0.0 ? -1.0 : 0.0);
      const double c_cross = weight * sign / (np * nq);
      const double c_p = raw_np > 0.0 ? -weight * u / (np * raw_np) : 0.0;
      const double raw_nq = nq - kNormEps;
      const double c_q = raw_nq > 0.0 ? -weight * u / (nq * raw_nq) : 0.0;
      for (int r = 0; r < rows; ++r) {
        const double mp = mv[static_cast<std::size_t>(r) * cols + p];
        const double mq = mv[static_cast<std::size_t>(r) * cols + q];
        grad[static_cast<std::size_t>(r) * cols + p] += c_cross * mq + c_p * mp;
        grad[static_cast<std::size_t>(r) * cols + q] += c_cross * mp + c_q * mq;
      }
    }
  }
  return {value, std::move(grad)};
}

ObjectiveEval objective_and_gradient(const CodeParams& params, const SurrogateObjective& objective,
                                     const SystemDims& dims) {
  params.validate(dims);
  const Circuit circuit = build_circuit(dims);
  const double beta = params.sigmoid_beta;
  const std::vector<Image> ap = relaxed_values(params.aperture_logits, beta);
  const std::vector<Image> sh = relaxed_values(params.shutter_logits, beta);
  const MeasurementMatrix m =
      assemble_from_values(circuit, sensor_shape(dims), ap, sh, kDefaultMatrixEntryCap);

  auto [value, matrix_grad] = objective_matrix_gradient(objective, m);

  ObjectiveEval eval;
  eval.value = value;
  const int num_slots = params.num_slots();
  eval.aperture_grad.assign(static_cast<std::size_t>(num_slots),
                            Image(circuit.aperture_shape.rows, circuit.aperture_shape.cols));
  eval.shutter_grad.assign(static_cast<std::size_t>(num_slots),
                           Image(circuit.shutter_shape.rows, circuit.shutter_shape.cols));

  // Backprop through the bilinear assembly into the relaxed code values.
  const int cols = m.cols();
  for (std::size_t c = 0; c < circuit.columns.size(); ++c) {
    const ColumnWiring& w = circuit.columns[c];
    const double gw =
        matrix_grad[static_cast<std::size_t>(w.row) * cols + c] * w.kappa;
    if (gw == 0.0) continue;
    for (int k = 0; k < num_slots; ++k) {
      const double a = ap[static_cast<std::size_t>(k)].values()[static_cast<std::size_t>(w.aperture_index)];
      const double s = sh[static_cast<std::size_t>(k)].values()[static_cast<std::size_t>(w.row)];
      eval.aperture_grad[static_cast<std::size_t>(k)].values()[static_cast<std::size_t>(w.aperture_index)] += gw * s;
      eval.shutter_grad[static_cast<std::size_t>(k)].values()[static_cast<std::size_t>(w.row)] += gw * a;
    }
  }

  // Optional binarization penalty on every relaxed code value.
  if (objective.binarization_weight != 0.0) {
    const double wb = objective.binarization_weight;
    for (int k = 0; k < num_slots; ++k) {
      for (std::size_t i = 0; i < ap[static_cast<std::size_t>(k)].size(); ++i) {
        const double v = ap[static_cast<std::size_t>(k)].values()[i];
        eval.value += wb * v * (1.0 - v);
        eval.aperture_grad[static_cast<std::size_t>(k)].values()[i] += wb * (1.0 - 2.0 * v);
      }
      for (std::size_t i = 0; i < sh[static_cast<std::size_t>(k)].size(); ++i) {
        const double v = sh[static_cast<std::size_t>(k)].values()[i];
        eval.value += wb * v * (1.0 - v);
        eval.shutter_grad[static_cast<std::size_t>(k)].values()[i] += wb * (1.0 - 2.0 * v);
      }
    }
  }

  // Chain rule through the sigmoid: d sigma / d logit = beta * s * (1 - s).
  for (int k = 0; k < num_slots; ++k) {
    for (std::size_t i = 0; i < ap[static_cast<std::size_t>(k)].size(); ++i) {
      const double s = ap[static_cast<std::size_t>(k)].values()[i];
      eval.aperture_grad[static_cast<std::size_t>(k)].values()[i] *= beta * s * (1.0 - s);
    }
    for (std::size_t i = 0; i < sh[static_cast<std::size_t>(k)].size(); ++i) {
      const double s = sh[static_cast<std::size_t>(k)].values()[i];
      eval.shutter_grad[static_cast<std::size_t>(k)].values()[i] *= beta * s * (1.0 - s);
    }
  }
  return eval;
}

OptimizeResult optimize_codes(const CodeParams& init, const SurrogateObjective& objective,
                              const SystemDims& dims, int steps, double learning_rate) {
  if (steps < 1) throw InvalidInputError("optimize_codes: steps must be >= 1");
  init.validate(dims);

  constexpr double kMomentum = 0.9;
  OptimizeResult result;
  result.params = init;

  std::vector<Image> ap_velocity;
  std::vector<Image> sh_velocity;
  for (const auto& l : init.aperture_logits) ap_velocity.emplace_back(l.rows(), l.cols());
  for (const auto& l : init.shutter_logits) sh_velocity.emplace_back(l.rows(), l.cols());

  CodeParams last_good = init;
  for (int step = 0; step < steps; ++step) {
    // A runaway step can push logits to inf/NaN; treat that as divergence
    // rather than an input error and keep the last finite parameters.
    bool params_finite = true;
    for (const auto& l : result.params.aperture_logits) {
      for (double v : l.values()) params_finite = params_finite && std::isfinite(v);
    }
    for (const auto& l : result.params.shutter_logits) {
      for (double v : l.values()) params_finite = params_finite && std::isfinite(v);
    }
    if (!params_finite) {
      result.diverged = true;
      result.params = last_good;
      break;
    }

    const ObjectiveEval eval = objective_and_gradient(result.params, objective, dims);

    const ApertureSequence quant_ap = quantize_aperture(result.params.aperture_logits);
    const ShutterSequence quant_sh = quantize_shutter(result.params.shutter_logits);
    const MeasurementMatrix quant_m = assemble_system_matrix(dims, quant_ap, quant_sh);
    const double quant_value = objective_value(objective, quant_m);

    if (!std::isfinite(eval.value) || !std::isfinite(quant_value)) {
      result.diverged = true;
      result.params = last_good;
      break;
    }
    last_good = result.params;
    result.trace.push_back({step, eval.value, quant_value});
    result.steps_done = step + 1;

    if (step + 1 == steps) break;  // final evaluation only

    for (int k = 0; k < result.params.num_slots(); ++k) {
      auto v = ap_velocity[static_cast<std::size_t>(k)].values();
      auto g = eval.aperture_grad[static_cast<std::size_t>(k)].values();
      auto th = result.params.aperture_logits[static_cast<std::size_t>(k)].values();
      for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = kMomentum * v[i] - learning_rate * g[i];
        th[i] += v[i];
      }
      auto vs = sh_velocity[static_cast<std::size_t>(k)].values();
      auto gs = eval.shutter_grad[static_cast<std::size_t>(k)].values();
      auto ths = result.params.shutter_logits[static_cast<std::size_t>(k)].values();
      for (std::size_t i = 0; i < vs.size(); ++i) {
        vs[i] = kMomentum * vs[i] - learning_rate * gs[i];
        ths[i] += vs[i];
      }
    }
  }

  result.aperture = quantize_aperture(result.params.aperture_logits);
  result.shutter = quantize_shutter(result.params.shutter_logits);
  return result;
}

CodeParams random_code_params(const SystemDims& dims, int num_slots, double sigmoid_beta,
                              std::uint64_t seed) {
  const auto [ap_shape, sh_shape] = code_shapes(dims);
  Rng rng(seed);
  CodeParams params;
  params.sigmoid_beta = sigmoid_beta;
  for (int k = 0; k < num_slots; ++k) {
    Image a(ap_shape.rows, ap_shape.cols);
    for (auto& v : a.values()) v = rng.uniform(-0.1, 0.1);
    params.aperture_logits.push_back(std::move(a));
    Image s(sh_shape.rows, sh_shape.cols);
    for (auto& v : s.values()) v = rng.uniform(-0.1, 0.1);
    params.shutter_logits.push_back(std::move(s));
  }
  return params;
}

}  // namespace tmca
