#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tmca/system.hpp"
#include "tmca/types.hpp"

// Gradient-based design of binary aperture/shutter codes. The forward model
// is exact and binary; gradients flow through a sigmoid relaxation of the
// hard threshold (the forward/backward mismatch): each code value is
// sigma(beta * logit) in the relaxed matrix, and quantize_code(logit) in
// the deployed one.
//
// The objective targets conditioning of the assembled matrix:
//
//   gram_identity:      || M^T M - I ||_F^2, which drives the squared
//                       singular values toward a flat unit spectrum.
//   coherence_softmax:  (1/gamma) * log sum exp(gamma * |G_pq| / (n_p n_q))
//                       over column pairs p < q, a smooth stand-in for the
//                       worst-case mutual coherence. Column norms are
//                       regularized as n = ||m|| + 1e-12.
//
// An optional binarization penalty weight * sum c*(1-c) over all relaxed
// code values c pulls the relaxation toward {0,1}, shrinking the gap
// between the relaxed objective and the quantized one.

namespace tmca {

struct CodeParams {
  std::vector<Image> aperture_logits;
  std::vector<Image> shutter_logits;
  double sigmoid_beta = 4.0;

  int num_slots() const { return static_cast<int>(aperture_logits.size()); }
  void validate(const SystemDims& dims) const;
};

enum class SurrogateKind { gram_identity, coherence_softmax };

struct SurrogateObjective {
  SurrogateKind kind = SurrogateKind::gram_identity;
  double binarization_weight = 0.0;
  double softmax_sharpness = 100.0;
};

/// Assembles the measurement matrix with every binary code replaced by its
/// sigmoid relaxation sigma(beta * logit).
MeasurementMatrix relaxed_matrix(const CodeParams& params, const SystemDims& dims,
                                 std::int64_t max_entries = kDefaultMatrixEntryCap);

struct ObjectiveEval {
  double value = 0.0;
  std::vector<Image> aperture_grad;
  std::vector<Image> shutter_grad;
};

/// Objective on the relaxed matrix plus its analytic gradient with respect
/// to every logit.
ObjectiveEval objective_and_gradient(const CodeParams& params, const SurrogateObjective& objective,
                                     const SystemDims& dims);

/// Objective evaluated on an arbitrary assembled matrix (no binarization
/// term). Used for quantized-code scoring and random baselines.
double objective_value(const SurrogateObjective& objective, const MeasurementMatrix& matrix);

/// Value and dF/dM for the matrix-level objective; the test suite
/// finite-difference checks this layer on generic dense matrices.
std::pair<double, std::vector<double>> objective_matrix_gradient(
    const SurrogateObjective& objective, const MeasurementMatrix& matrix);

struct OptimizeTraceRow {
  int step = 0;
  double relaxed_objective = 0.0;
  double quantized_objective = 0.0;
};

struct OptimizeResult {
  CodeParams params;
  ApertureSequence aperture;
  ShutterSequence shutter;
  std::vector<OptimizeTraceRow> trace;
  int steps_done = 0;
  bool diverged = false;
};

/// Gradient descent with momentum 0.9 on the logits. The trace records the
/// relaxed and quantized objective at every step; the returned codes are
/// the quantization of the final logits. On a non-finite objective the loop
/// stops, flags divergence, and keeps the last finite parameters.
OptimizeResult optimize_codes(const CodeParams& init, const SurrogateObjective& objective,
                              const SystemDims& dims, int steps, double learning_rate);

/// Seeded uniform(-0.1, 0.1) logits (near-0.5 relaxed codes).
CodeParams random_code_params(const SystemDims& dims, int num_slots, double sigmoid_beta,
                              std::uint64_t seed);

}  // namespace tmca
