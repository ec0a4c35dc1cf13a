#pragma once

#include "sigdet/statistic.hpp"

#include <span>
#include <vector>

namespace sigdet {

struct PermutationReport {
  double observed = 0.0;
  int r = 0;
  /// Permuted values strictly above / equal to the observed one, compared
  /// after rounding both to 12 significant digits.
  int greater = 0;
  int equal = 0;

  /// P{T_pi >= T} over the r permutations.
  double p_value_paper() const noexcept { return static_cast<double>(greater + equal) / r; }
  /// Counts the observed labelling as one more permutation.
  double p_value_add_one() const noexcept { return static_cast<double>(greater + equal + 1) / (r + 1); }
};

enum class RefoldPolicy { RefoldPerPermutation, FixedFolds };
enum class PValueMode { PaperExact, AddOne };

struct PermutationOptions {
  int r = 300;
  RefoldPolicy policy = RefoldPolicy::RefoldPerPermutation;
  /// Worker threads for permutations; 1 runs inline.
  int threads = 1;
  /// Keep every permuted value in the report (tests and diagnostics).
  bool keep_null_values = false;
};

struct PermutationResult {
  std::vector<PermutationReport> reports;
  /// null_values[s][j] = statistic s under permutation j, when requested.
  std::vector<std::vector<double>> null_values;
  /// Wall-clock seconds spent evaluating each statistic, observed included.
  std::vector<double> seconds;
};

/// 12-significant-digit canonical form used for tie detection.
double canonical_round(double x);

/// Label-permutation test for several statistics on one shared sequence of
/// permutations.
///
/// Stream layout under `rng`: permutation j (1-based) shuffles the labels with
/// child {1, j}; statistic s evaluated on labelling j (0 = observed) resamples
/// with child {2, j, s}. With FixedFolds the folds drawn for the observed
/// labelling are reused by every permutation. A failing evaluation throws.
PermutationResult permutation_test(const LabeledDataset& ds, std::span<const StatisticSpec> statistics,
                                   const PermutationOptions& options, const RngStream& rng);

PermutationReport permutation_test(const LabeledDataset& ds, const StatisticSpec& statistic, int r,
                                   RefoldPolicy policy, const RngStream& rng);

double p_value(const PermutationReport& report, PValueMode mode) noexcept;

/// Reject when the p-value is at most alpha. Otherwise, with tie_break and
/// ties present, reject iff u < max{(alpha - P{T_pi > T}) / P{T_pi = T}, 0}.
/// In AddOne mode the observed labelling joins the tie set, so the
/// proportions use greater / (r + 1) and (equal + 1) / (r + 1).
TestDecision decide(const PermutationReport& report, double alpha, bool tie_break, double u,
                    PValueMode mode = PValueMode::PaperExact);

/// The randomized rejection probability used by decide() (1 on the
/// deterministic branch).
double rejection_probability(const PermutationReport& report, double alpha, bool tie_break,
                             PValueMode mode = PValueMode::PaperExact);

}  // namespace sigdet
