#pragma once

#include "sigdet/model.hpp"
#include "sigdet/rng.hpp"
#include "sigdet/stats_kernel.hpp"

#include <string_view>

namespace sigdet {

enum class ClassifierFamily { Lda, Dlda, Sdlda, Hdrda, LinearSvm };

std::string_view to_string(ClassifierFamily family) noexcept;

struct ClassifierSpec {
  ClassifierFamily family = ClassifierFamily::Lda;
  /// linear_svm only.
  double cost = 1.0;
  /// hdrda only: weight on the scaled-identity target.
  double hdrda_mix = 0.5;
  /// linear_svm stopping rule: max projected-gradient violation, epoch cap.
  double svm_tolerance = 1e-4;
  int svm_max_epochs = 10'000;
};

/// Solver diagnostics carried alongside a fitted model.
struct FitInfo {
  /// A singular (pseudo-inverse) covariance path was taken.
  bool pseudo_inverse_used = false;
  /// The discriminant direction came from the null space of the covariance.
  bool null_space_direction = false;
  bool converged = true;
  int epochs = 0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  std::optional<double> shrinkage_weight;
};

struct LinearModel {
  Vector weights;
  double bias = 0.0;
  Index trained_n = 0;
  Index trained_p = 0;
  Index trained_n0 = 0;
  Index trained_n1 = 0;
  FitInfo info;
};

/// Trains on the view's rows (repeats allowed).
///
/// Discriminant families use w = M^-1 d and b = -w'(mean0 + mean1)/2 +
/// ln(n1/n0), where M is the pooled covariance (lda), its diagonal (dlda), the
/// diagonal with variances shrunk toward their mean (sdlda), or
/// (1 - mix) S + mix (tr S / p) I (hdrda). When M is singular and d has a
/// component in its null space, the model uses the limit of (M + eps I)^-1 d
/// as eps -> 0: w is that null-space component and the prior term drops out.
///
/// linear_svm minimises 0.5 |w|^2 + cost * sum hinge(y_i (w'x_i + b)) with
/// the bias as an extra unit feature (so it is penalised), by dual coordinate
/// descent in cyclic order.
///
/// Throws SingleClassTrainingSet when the view holds only one class.
LinearModel fit(const SampleView& view, const ClassifierSpec& spec);

/// `rng` is accepted for interface stability; every family is deterministic.
LinearModel fit(const LabeledDataset& ds, const ClassifierSpec& spec, RngStream& rng);

/// 1 if w'x + b >= 0, else 0. Throws DimensionMismatch.
int predict(const LinearModel& model, const Eigen::Ref<const Vector>& x);

/// Primal objective of the linear SVM problem at (w, b), bias penalised,
/// used by tests and diagnostics.
double svm_primal_objective(const SampleView& view, double cost, const Vector& weights, double bias);

}  // namespace sigdet
