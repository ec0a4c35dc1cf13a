#pragma once

#include "sigdet/classifiers.hpp"
#include "sigdet/model.hpp"
#include "sigdet/rng.hpp"

#include <string_view>
#include <vector>

namespace sigdet {

struct FoldAssignment {
  /// fold_of[i] in [0, V).
  std::vector<int> fold_of;
  int V = 0;
  bool balanced = false;
};

/// Random V-fold partition. Fold sizes differ by at most one; when balanced,
/// so do the per-fold counts within each class. Throws TooManyFolds if V > n
/// and InvalidArgument if V < 2.
FoldAssignment make_folds(std::span<const int> labels, int V, bool balanced, RngStream& rng);
inline FoldAssignment make_folds(const LabeledDataset& ds, int V, bool balanced, RngStream& rng) {
  return make_folds(ds.labels(), V, balanced, rng);
}

struct BootstrapPlan {
  /// B multisets of size n, as row indices.
  std::vector<std::vector<Index>> samples;
  /// holdout_of[b] = rows absent from samples[b], ascending.
  std::vector<std::vector<Index>> holdout_of;
  /// Draws whose sample kept a single class after all retries.
  std::vector<bool> single_class;
};

inline constexpr int kBootstrapRetries = 100;

/// Draws B bootstrap samples. A sample containing one class only is redrawn
/// up to kBootstrapRetries times; if it still has one class it is kept and
/// flagged.
BootstrapPlan make_bootstrap_plan(std::span<const int> labels, int B, RngStream& rng);

enum class EstimatorKind { Resub, Vfold, Bloo };

std::string_view to_string(EstimatorKind kind) noexcept;

struct AccuracyEstimate {
  double value = 0.0;
  EstimatorKind estimator = EstimatorKind::Resub;
  /// Number of prediction events averaged.
  Index support = 0;
  /// Folds or bootstrap draws whose training sample had a single class.
  int degenerate_trainings = 0;
  /// Bootstrap draws skipped for an empty holdout.
  int empty_holdouts = 0;
};

/// Fraction of training points classified correctly by the model fit on all of ds.
AccuracyEstimate resub_accuracy(const LabeledDataset& ds, const ClassifierSpec& spec, RngStream& rng);

/// Mean over folds of the per-fold holdout accuracy of the model trained on
/// the complement. A single-class complement predicts its only class.
AccuracyEstimate vfold_accuracy(const LabeledDataset& ds, const ClassifierSpec& spec,
                                const FoldAssignment& folds, RngStream& rng);

/// Leave-one-out bootstrap, bootstrap form: mean over draws with a non-empty
/// holdout of the holdout accuracy of the model fit on the draw. Throws
/// AllHoldoutsEmpty when every draw covers all rows.
AccuracyEstimate bloo_accuracy(const LabeledDataset& ds, const ClassifierSpec& spec, int B, RngStream& rng);
AccuracyEstimate bloo_accuracy(const LabeledDataset& ds, const ClassifierSpec& spec,
                               const BootstrapPlan& plan);

}  // namespace sigdet
