#pragma once

#include <span>
#include <vector>

#include "tmca/types.hpp"

// Slot-wise composition of a coded exposure from per-slot sensor fields and
// a binary pixel-shutter sequence, plus the generic dense measurement
// operator and its adjoint. All arithmetic is double precision; snapshots
// are raw slot sums (no normalization by K), which keeps the operators
// exactly linear and consistent with the assembled matrices.

namespace tmca {

/// e(i,j) = sum_k S_k(i,j) * g_k(i,j).
Snapshot compose_exposure(const std::vector<SlotField>& slot_fields,
                          const ShutterSequence& shutter);

/// Snapshot = reshape(M * scene).
Snapshot apply_matrix(const MeasurementMatrix& matrix, std::span<const double> scene);

/// scene = M^T * vec(snapshot).
std::vector<double> apply_adjoint(const MeasurementMatrix& matrix, const Snapshot& snapshot);

/// Hard threshold at zero: 1 if logit > 0, else 0 (a logit of exactly zero
/// maps to 0). NaN logits are rejected.
BinaryMask quantize_code(const Image& logits);

ApertureSequence quantize_aperture(const std::vector<Image>& logits);
ShutterSequence quantize_shutter(const std::vector<Image>& logits);

}  // namespace tmca
