#include "sigdet/statistic.hpp"


namespace sigdet {

bool StatisticSpec::uses_folds() const noexcept {
  const auto* acc = std::get_if<AccuracyStatSpec>(&kind);
  return acc && acc->estimator == EstimatorKind::Vfold;
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {
      "Oracle",     "Hotelling",  "Hotelling.shrink", "Goeman",        "sd",
      "lda.CV.1",   "lda.noCV.1", "svm.CV.1",         "svm.CV.2",      "svm.noCV.1",
      "svm.noCV.2", "LDA.Boot.1", "SVM.Boot.1",       "SVM.Boot.2",    "SVM.Boot.3",
      "SVM.Boot.4", "svm.CV.5",   "svm.CV.6",         "lda.highdim.1", "lda.highdim.2",
      "lda.highdim.3", "lda.highdim.4"};
  return names;
}

const std::vector<std::string>& basic_battery() {
  static const std::vector<std::string> names(catalog_names().begin(), catalog_names().begin() + 11);
  return names;
}

namespace {

StatisticSpec location(const std::string& name, LocationKind kind) {
  return StatisticSpec{name, LocationStatSpec{kind, nullptr}};
}

StatisticSpec accuracy(const std::string& name, ClassifierFamily family, double cost, EstimatorKind est,
                       int B, const CatalogOptions& opts) {
  AccuracyStatSpec a;
  a.classifier.family = family;
  a.classifier.cost = cost;
  a.classifier.hdrda_mix = opts.hdrda_mix;
  a.estimator = est;
  a.folds = opts.folds;
  a.balanced = opts.balanced;
  a.bootstrap_draws = B;
  return StatisticSpec{name, a};
}

}  // namespace

StatisticSpec statistic_by_name(const std::string& name, const CatalogOptions& o) {
  using F = ClassifierFamily;
  using E = EstimatorKind;
  if (name == "Oracle") return location(name, LocationKind::Oracle);
  if (name == "Hotelling") return location(name, LocationKind::Hotelling);
  if (name == "Hotelling.shrink") return location(name, LocationKind::HotellingShrink);
  if (name == "Goeman") return location(name, LocationKind::Goeman);
  if (name == "sd") return location(name, LocationKind::Sd);
  if (name == "lda.CV.1") return accuracy(name, F::Lda, 0, E::Vfold, 0, o);
  if (name == "lda.noCV.1") return accuracy(name, F::Lda, 0, E::Resub, 0, o);
  if (name == "svm.CV.1") return accuracy(name, F::LinearSvm, 10, E::Vfold, 0, o);
  if (name == "svm.CV.2") return accuracy(name, F::LinearSvm, 0.1, E::Vfold, 0, o);
  if (name == "svm.noCV.1") return accuracy(name, F::LinearSvm, 10, E::Resub, 0, o);
  if (name == "svm.noCV.2") return accuracy(name, F::LinearSvm, 0.1, E::Resub, 0, o);
  if (name == "LDA.Boot.1") return accuracy(name, F::Lda, 0, E::Bloo, 10, o);
  if (name == "SVM.Boot.1") return accuracy(name, F::LinearSvm, 10, E::Bloo, 10, o);
  if (name == "SVM.Boot.2") return accuracy(name, F::LinearSvm, 0.1, E::Bloo, 10, o);
  if (name == "SVM.Boot.3") return accuracy(name, F::LinearSvm, 10, E::Bloo, 50, o);
  if (name == "SVM.Boot.4") return accuracy(name, F::LinearSvm, 0.1, E::Bloo, 50, o);
  if (name == "svm.CV.5") return accuracy(name, F::LinearSvm, 100, E::Vfold, 0, o);
  if (name == "svm.CV.6") return accuracy(name, F::LinearSvm, 0.01, E::Vfold, 0, o);
  if (name == "lda.highdim.1") return accuracy(name, F::Dlda, 0, E::Vfold, 0, o);
  if (name == "lda.highdim.2") return accuracy(name, F::Hdrda, 0, E::Vfold, 0, o);
  if (name == "lda.highdim.3") return accuracy(name, F::Sdlda, 0, E::Vfold, 0, o);
  if (name == "lda.highdim.4") return accuracy(name, F::Sdlda, 0, E::Bloo, 50, o);
  throw Error(ErrorCode::InvalidArgument, "unknown statistic '" + name + "'");
}

void bind_oracle_sigma(std::vector<StatisticSpec>& stats, const Matrix& sigma) {
  std::optional<LocationStatSpec> oracle;
  for (auto& s : stats) {
    auto* loc = std::get_if<LocationStatSpec>(&s.kind);
    if (loc && loc->kind == LocationKind::Oracle) {
      if (!oracle) oracle = make_oracle_spec(sigma);
      *loc = *oracle;
    }
  }
}

double evaluate_statistic(const StatisticSpec& spec, const LabeledDataset& ds, RngStream& resample,
                          const FoldAssignment* fixed_folds) {
  if (const auto* loc = std::get_if<LocationStatSpec>(&spec.kind)) return location_statistic(ds, *loc);
  const auto& acc = std::get<AccuracyStatSpec>(spec.kind);
  switch (acc.estimator) {
    case EstimatorKind::Resub:
      return resub_accuracy(ds, acc.classifier, resample).value;
    case EstimatorKind::Vfold: {
      if (fixed_folds) return vfold_accuracy(ds, acc.classifier, *fixed_folds, resample).value;
      const FoldAssignment folds = make_folds(ds, acc.folds, acc.balanced, resample);
      return vfold_accuracy(ds, acc.classifier, folds, resample).value;
    }
    case EstimatorKind::Bloo:
      return bloo_accuracy(ds, acc.classifier, acc.bootstrap_draws, resample).value;
  }
  return 0.0;
}

}  // namespace sigdet
