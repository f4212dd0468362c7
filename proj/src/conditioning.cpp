#include "tmca/conditioning.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tmca/linalg.hpp"
#include "tmca/rng.hpp"

namespace tmca {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

SpectrumReport spectrum(const MeasurementMatrix& matrix, const SpectrumOptions& opts) {
  const int rows = matrix.rows();
  const int cols = matrix.cols();
  if (rows == 0 || cols == 0) {
    throw DimensionError("spectrum: empty matrix");
  }
  const int gram_dim = std::min(rows, cols);
  if (gram_dim > opts.max_gram_dim || cols > opts.max_gram_dim) {
    throw CapacityError("spectrum: Gram dimension " + std::to_string(std::max(gram_dim, cols)) +
                        " exceeds cap " + std::to_string(opts.max_gram_dim));
  }

  // Eigenvalues of the smaller Gram matrix; both share the nonzero spectrum.
  std::vector<double> g(static_cast<std::size_t>(gram_dim) * gram_dim, 0.0);
  if (rows <= cols) {
    linalg::gram_right(matrix.values(), rows, cols, g);
  } else {
    linalg::gram(matrix.values(), rows, cols, g);
  }
  std::vector<double> eig = linalg::sym_eigenvalues(g, gram_dim);

  SpectrumReport report;
  report.eigenvalues.assign(eig.rbegin(), eig.rend());
  const double lambda_max = report.eigenvalues.empty() ? 0.0 : report.eigenvalues.front();
  if (lambda_max < -1e-10) {
    throw SolverError("spectrum: negative leading eigenvalue of a Gram matrix");
  }
  for (double& v : report.eigenvalues) {
    if (v < 0.0) v = 0.0;
  }

  if (lambda_max > 0.0) {
    const double clip = 1e-12 * lambda_max;
    double smallest_retained = lambda_max;
    int clipped = 0;
    for (double v : report.eigenvalues) {
      if (v < clip) {
        ++clipped;
      } else {
        smallest_retained = std::min(smallest_retained, v);
      }
    }
    report.near_zero_count = clipped;
    report.spread_ratio = smallest_retained / lambda_max;
  } else {
    report.near_zero_count = static_cast<int>(report.eigenvalues.size());
    report.spread_ratio = 0.0;
  }

  double total = 0.0;
  for (double v : report.eigenvalues) total += v;
  report.decay_profile.assign(report.eigenvalues.size(), 0.0);
  double running = 0.0;
  for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
    running += report.eigenvalues[i];
    report.decay_profile[i] = total > 0.0 ? running / total : 0.0;
  }

  // Mutual coherence over normalized columns.
  std::vector<double> col_gram(static_cast<std::size_t>(cols) * cols, 0.0);
  linalg::gram(matrix.values(), rows, cols, col_gram);
  double mu = 0.0;
  for (int p = 0; p < cols; ++p) {
    const double np = std::sqrt(col_gram[static_cast<std::size_t>(p) * cols + p]);
    if (np == 0.0) continue;
    for (int q = p + 1; q < cols; ++q) {
      const double nq = std::sqrt(col_gram[static_cast<std::size_t>(q) * cols + q]);
      if (nq == 0.0) continue;
      mu = std::max(mu, std::fabs(col_gram[static_cast<std::size_t>(p) * cols + q]) / (np * nq));
    }
  }
  report.coherence = std::min(mu, 1.0);
  return report;
}

std::vector<StudyRow> conditioning_study(const StudyConfig& config) {
  if (config.num_seeds < 1) throw InvalidInputError("conditioning_study: num_seeds must be >= 1");
  std::vector<StudyRow> rows;
  rows.reserve(config.slot_counts.size() * static_cast<std::size_t>(config.num_seeds));
  for (int num_slots : config.slot_counts) {
    if (num_slots < 1) throw InvalidInputError("conditioning_study: K must be >= 1");
    for (int s = 0; s < config.num_seeds; ++s) {
      StudyRow row;
      row.num_slots = num_slots;
      row.seed_index = s;
      row.seed = mix_seed(config.base_seed, static_cast<std::uint64_t>(num_slots),
                          static_cast<std::uint64_t>(s));
      const bool open_shutter = config.open_shutter_when_single_slot && num_slots == 1;
      auto [aperture, shutter] =
          open_shutter ? random_aperture_open_shutter(config.dims, num_slots, row.seed)
                       : random_codes(config.dims, num_slots, row.seed);
      const MeasurementMatrix m = assemble_system_matrix(config.dims, aperture, shutter);
      row.report = spectrum(m, config.spectrum_options);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<StudySummary> summarize_study(const std::vector<StudyRow>& rows) {
  std::vector<int> ks;
  for (const auto& row : rows) {
    if (std::find(ks.begin(), ks.end(), row.num_slots) == ks.end()) ks.push_back(row.num_slots);
  }
  std::vector<StudySummary> out;
  for (int k : ks) {
    StudySummary s;
    s.num_slots = k;
    std::vector<double> spreads;
    std::vector<double> zeros;
    std::vector<double> mus;
    std::size_t profile_len = 0;
    for (const auto& row : rows) {
      if (row.num_slots != k) continue;
      spreads.push_back(row.report.spread_ratio);
      zeros.push_back(static_cast<double>(row.report.near_zero_count));
      mus.push_back(row.report.coherence);
      profile_len = std::max(profile_len, row.report.decay_profile.size());
    }
    s.median_spread_ratio = median(spreads);
    s.median_near_zero_count = median(zeros);
    s.median_coherence = median(mus);
    s.median_decay_profile.resize(profile_len, 0.0);
    for (std::size_t i = 0; i < profile_len; ++i) {
      std::vector<double> vals;
      for (const auto& row : rows) {
        if (row.num_slots == k && i < row.report.decay_profile.size()) {
          vals.push_back(row.report.decay_profile[i]);
        }
      }
      s.median_decay_profile[i] = median(std::move(vals));
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace tmca
