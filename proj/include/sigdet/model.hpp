#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sigdet {

/// Observation-major feature storage: row i is x_i.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = std::ptrdiff_t;
/// Class codes, 0 or 1.
using Labels = std::vector<int>;

enum class ErrorCode {
  EmptyClass,
  NonFinite,
  ShapeMismatch,
  InvalidArgument,
  DegenerateClass,
  NotSymmetric,
  MissingOracleSigma,
  SingleClassTrainingSet,
  DimensionMismatch,
  TooManyFolds,
  AllHoldoutsEmpty,
  BadRho,
  SingularSigma,
  MissingCell,
  ConfigError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// The sample S = {(x_i, y_i)}: an immutable n x p feature matrix with binary
/// labels. Features are shared between datasets that differ only in labels,
/// so relabelling for a permutation costs O(n).
class LabeledDataset {
 public:
  /// Validates and takes a copy of the inputs.
  /// Throws ShapeMismatch, NonFinite, EmptyClass, InvalidArgument.
  LabeledDataset(const FeatureMatrix& features, Labels labels);

  Index n() const noexcept { return static_cast<Index>(labels_.size()); }
  Index p() const noexcept { return features_->cols(); }
  Index n0() const noexcept { return n0_; }
  Index n1() const noexcept { return n() - n0_; }

  const FeatureMatrix& features() const noexcept { return *features_; }
  std::span<const int> labels() const noexcept { return labels_; }
  int label(Index i) const { return labels_[static_cast<std::size_t>(i)]; }

  /// Same features, new labels. Label validity is checked; features are not
  /// re-scanned.
  LabeledDataset with_labels(Labels labels) const;

  /// Shared handle to the feature storage.
  std::shared_ptr<const FeatureMatrix> shared_features() const noexcept { return features_; }

 private:
  LabeledDataset(std::shared_ptr<const FeatureMatrix> features, Labels labels);
  void check_labels();

  std::shared_ptr<const FeatureMatrix> features_;
  Labels labels_;
  Index n0_ = 0;
};

/// Builds a validated dataset; the named entry point for validation.
LabeledDataset validate_dataset(const FeatureMatrix& features, const Labels& labels);

struct TestDecision {
  double p_value = 1.0;
  bool rejected = false;
  bool tie_randomization_used = false;
  double alpha = 0.05;
};

/// Minimum sample size accepted by LabeledDataset.
inline constexpr Index kMinObservations = 4;

}  // namespace sigdet
