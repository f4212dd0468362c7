#pragma once

#include <cstdint>
#include <vector>

#include "tmca/system.hpp"
#include "tmca/types.hpp"

// Conditioning analysis of measurement matrices: the eigenvalue spectrum of
// the Gram matrix (M^T M or M M^T, whichever is smaller), its decay
// profile, and the mutual coherence of the columns. A flat spectrum with
// few near-zero eigenvalues means a better-posed inverse problem.

namespace tmca {

struct SpectrumReport {
  /// Eigenvalues of the smaller Gram matrix, descending, clipped at zero.
  std::vector<double> eigenvalues;
  /// Smallest retained eigenvalue (above 1e-12 * max) over the largest;
  /// zero when the matrix is empty or all-zero.
  double spread_ratio = 0.0;
  /// Count of eigenvalues below 1e-12 * max (the clipped ones).
  int near_zero_count = 0;
  /// Normalized cumulative energy: profile[i] = sum of the first i+1
  /// eigenvalues over the total. Flatter spectra give lower head values.
  std::vector<double> decay_profile;
  /// Max absolute normalized off-diagonal column Gram entry, in [0, 1].
  double coherence = 0.0;
};

struct SpectrumOptions {
  /// Cap on min(rows, cols) for the dense eigensolve and on cols for the
  /// coherence Gram.
  int max_gram_dim = 2048;
};

SpectrumReport spectrum(const MeasurementMatrix& matrix, const SpectrumOptions& opts = {});

struct StudyConfig {
  SystemDims dims;
  std::vector<int> slot_counts;
  int num_seeds = 20;
  std::uint64_t base_seed = 0;
  /// By default every slot of both codes is Bernoulli(0.5), including K=1.
  /// Enabling this keeps the shutter open at K=1 (a plain coded aperture
  /// with full exposure), the traditional no-coded-exposure baseline.
  bool open_shutter_when_single_slot = false;
  SpectrumOptions spectrum_options;
};

struct StudyRow {
  int num_slots = 0;
  int seed_index = 0;
  std::uint64_t seed = 0;
  SpectrumReport report;
};

/// Assembles seeded random-code systems per (K, seed) and computes their
/// spectra. Rows come back grouped by K in slot_counts order, seeds
/// ascending; every row is reproducible from (base_seed, K, seed_index).
std::vector<StudyRow> conditioning_study(const StudyConfig& config);

struct StudySummary {
  int num_slots = 0;
  double median_spread_ratio = 0.0;
  double median_near_zero_count = 0.0;
  double median_coherence = 0.0;
  /// Pointwise median of the per-seed decay profiles.
  std::vector<double> median_decay_profile;
};

std::vector<StudySummary> summarize_study(const std::vector<StudyRow>& rows);

}  // namespace tmca
