#include "sigdet/model.hpp"

#include <cmath>
#include <utility>

namespace sigdet {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateClass: return "DegenerateClass";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::MissingOracleSigma: return "MissingOracleSigma";
    case ErrorCode::SingleClassTrainingSet: return "SingleClassTrainingSet";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooManyFolds: return "TooManyFolds";
    case ErrorCode::AllHoldoutsEmpty: return "AllHoldoutsEmpty";
    case ErrorCode::BadRho: return "BadRho";
    case ErrorCode::SingularSigma: return "SingularSigma";
    case ErrorCode::MissingCell: return "MissingCell";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

LabeledDataset::LabeledDataset(const FeatureMatrix& features, Labels labels)
    : features_(std::make_shared<const FeatureMatrix>(features)), labels_(std::move(labels)) {
  if (features_->rows() != static_cast<Index>(labels_.size())) {
    throw Error(ErrorCode::ShapeMismatch, std::to_string(features_->rows()) + " rows but " +
                                              std::to_string(labels_.size()) + " labels");
  }
  if (features_->cols() < 1) throw Error(ErrorCode::ShapeMismatch, "no feature columns");
  if (!features_->allFinite()) throw Error(ErrorCode::NonFinite, "feature matrix has NaN or Inf");
  check_labels();
}

LabeledDataset::LabeledDataset(std::shared_ptr<const FeatureMatrix> features, Labels labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (features_->rows() != static_cast<Index>(labels_.size())) {
    throw Error(ErrorCode::ShapeMismatch, "label vector length differs from row count");
  }
  check_labels();
}

void LabeledDataset::check_labels() {
  n0_ = 0;
  for (int y : labels_) {
    if (y != 0 && y != 1) throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
    n0_ += (y == 0);
  }
  if (n0_ == 0 || n0_ == n()) throw Error(ErrorCode::EmptyClass, "both classes must be present");
  if (n() < kMinObservations) {
    throw Error(ErrorCode::InvalidArgument, "need at least 4 observations");
  }
}

LabeledDataset LabeledDataset::with_labels(Labels labels) const {
  return LabeledDataset(features_, std::move(labels));
}

LabeledDataset validate_dataset(const FeatureMatrix& features, const Labels& labels) {
  return LabeledDataset(features, labels);
}

}  // namespace sigdet
