#pragma once

#include "sigdet/model.hpp"

#include <memory>
#include <optional>
#include <string_view>
#include <utility>

namespace sigdet {

enum class LocationKind { Oracle, Hotelling, HotellingShrink, Goeman, Sd };

std::string_view to_string(LocationKind kind) noexcept;

struct LocationStatSpec {
  LocationKind kind = LocationKind::Hotelling;
  /// Generative covariance; required iff kind == Oracle.
  std::shared_ptr<const Matrix> oracle_sigma;
};

/// Builds an oracle spec, checking that sigma is symmetric positive definite.
LocationStatSpec make_oracle_spec(Matrix sigma);

struct LocationResult {
  double value = 0.0;
  bool pseudo_inverse_used = false;
  /// sd only: coordinates with zero pooled variance that were dropped.
  Index dropped_coordinates = 0;
  /// hotelling_shrink only.
  std::optional<double> shrinkage_weight;
};

/// Two-sample quadratic-form statistic (n0 n1 / n) d' W d, d = mean1 - mean0.
///
///   oracle            W = Sigma^-1 (generative)
///   hotelling         W = S^+ (pooled covariance; pseudo-inverse if singular)
///   hotelling_shrink  W = (shrunk S)^-1, diagonal target
///   goeman            W = I
///   sd                W = diag(S)^-1, zero-variance coordinates weighted 0
///
/// goeman and sd are the monotone cores of the global test and of the
/// Srivastava-Du statistic respectively: at fixed (n0, n1) the published
/// statistics are strictly increasing functions of these, so permutation
/// p-values coincide. Right-tailed.
LocationResult evaluate_location(const LabeledDataset& ds, const LocationStatSpec& spec);

inline double location_statistic(const LabeledDataset& ds, const LocationStatSpec& spec) {
  return evaluate_location(ds, spec).value;
}

/// (goeman statistic, (n0 n1 / n) * |d|^2) computed along separate paths.
std::pair<double, double> goeman_equivalence_check(const LabeledDataset& ds);

}  // namespace sigdet
