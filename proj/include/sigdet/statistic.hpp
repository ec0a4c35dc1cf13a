#pragma once

#include "sigdet/accuracy.hpp"
#include "sigdet/location.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sigdet {

struct AccuracyStatSpec {
  ClassifierSpec classifier;
  EstimatorKind estimator = EstimatorKind::Vfold;
  int folds = 4;
  bool balanced = true;
  int bootstrap_draws = 10;
};

/// A named, fully parameterized test statistic.
struct StatisticSpec {
  std::string name;
  std::variant<LocationStatSpec, AccuracyStatSpec> kind;

  bool is_location() const noexcept { return std::holds_alternative<LocationStatSpec>(kind); }
  bool uses_folds() const noexcept;
};

/// Catalog names, in table order:
///   Oracle Hotelling Hotelling.shrink Goeman sd
///   lda.CV.1 lda.noCV.1 svm.CV.1 svm.CV.2 svm.noCV.1 svm.noCV.2
///   LDA.Boot.1 SVM.Boot.1 SVM.Boot.2 SVM.Boot.3 SVM.Boot.4
///   svm.CV.5 svm.CV.6 lda.highdim.1 lda.highdim.2 lda.highdim.3 lda.highdim.4
const std::vector<std::string>& catalog_names();

/// The core battery (first eleven names above).
const std::vector<std::string>& basic_battery();

struct CatalogOptions {
  int folds = 4;
  bool balanced = true;
  double hdrda_mix = 0.5;
};

/// Looks a statistic up by catalog name. Oracle comes back without sigma; bind
/// it with bind_oracle_sigma. Throws InvalidArgument for unknown names.
StatisticSpec statistic_by_name(const std::string& name, const CatalogOptions& opts = {});

/// Attaches sigma to every oracle statistic in the list.
void bind_oracle_sigma(std::vector<StatisticSpec>& stats, const Matrix& sigma);

/// Evaluates the statistic on ds. Fold and bootstrap randomness comes from
/// `resample`; `fixed_folds`, when given, replaces fresh folding.
double evaluate_statistic(const StatisticSpec& spec, const LabeledDataset& ds, RngStream& resample,
                          const FoldAssignment* fixed_folds = nullptr);

}  // namespace sigdet
