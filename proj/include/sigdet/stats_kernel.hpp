#pragma once

#include "sigdet/model.hpp"

#include <optional>
#include <span>

namespace sigdet {

/// Rows of a feature matrix taken together with a label for every row. `rows`
/// selects the participating observations and may repeat indices (bootstrap
/// samples); an empty `rows` means all rows in order.
struct SampleView {
  const FeatureMatrix* features = nullptr;
  std::span<const int> labels;
  std::span<const Index> rows;

  Index size() const noexcept {
    return rows.empty() ? features->rows() : static_cast<Index>(rows.size());
  }
  Index row(Index k) const noexcept { return rows.empty() ? k : rows[static_cast<std::size_t>(k)]; }
  int label_at(Index k) const noexcept { return labels[static_cast<std::size_t>(row(k))]; }
};

SampleView view_of(const LabeledDataset& ds) noexcept;

struct GroupSummary {
  Vector mean0;
  Vector mean1;
  /// mean1 - mean0, taken after both means are accumulated in row order.
  Vector diff;
  Index n0 = 0;
  Index n1 = 0;
};

GroupSummary group_summary(const LabeledDataset& ds);
/// Either count may be zero; the corresponding mean is then the zero vector.
GroupSummary group_summary(const SampleView& view);

enum class CovarianceKind { Pooled, Shrunk, Diagonal, Oracle };

struct CovarianceEstimate {
  Matrix matrix;
  CovarianceKind kind = CovarianceKind::Pooled;
  std::optional<double> shrinkage_weight;
};

/// Result of applying a generalized inverse of the pooled covariance.
struct ScatterSolve {
  /// S^+ d, the minimum-norm least-squares solution.
  Vector range_part;
  /// Component of d in the null space of S.
  Vector null_part;
  Index rank = 0;
  bool rank_deficient = false;
};

/// Within-class residuals r_k = x_k - mean_{y_k} for a sample, with pooled
/// degrees of freedom n - 2. Everything covariance-shaped downstream
/// (pooled S, shrinkage weights, discriminant directions) is built from here.
class WithinClassScatter {
 public:
  explicit WithinClassScatter(const SampleView& view);
  explicit WithinClassScatter(const LabeledDataset& ds);

  const GroupSummary& summary() const noexcept { return summary_; }
  const Matrix& residuals() const noexcept { return residuals_; }
  Index dof() const noexcept { return summary_.n0 + summary_.n1 - 2; }
  Index p() const noexcept { return residuals_.cols(); }

  /// Pooled covariance R'R / (n - 2); the zero matrix when n - 2 <= 0.
  Matrix covariance() const;
  /// Diagonal of covariance() without forming the full matrix.
  Vector variances() const;

  /// Generalized solve against the pooled covariance. Uses the p x p
  /// eigendecomposition when p <= n and the n x n Gram matrix otherwise.
  /// Eigenvalues below 1e-10 * max are treated as zero.
  ScatterSolve solve(const Vector& d) const;

 private:
  GroupSummary summary_;
  Matrix residuals_;
};

/// Pooled covariance [(n0-1) S0 + (n1-1) S1] / (n - 2).
/// Throws DegenerateClass when n - 2 <= 0.
CovarianceEstimate pooled_covariance(const LabeledDataset& ds);

/// Analytic shrinkage intensity toward the diagonal target:
///   lambda = sum_{i!=j} Var^(s_ij) / sum_{i!=j} s_ij^2
/// with Var^(s_ij) = n / ((n-1) dof^2) * sum_k (w_kij - mean_k w_kij)^2 and
/// w_kij = r_ki r_kj over pooled residuals. Clamped to [0, 1]; 1 when the
/// off-diagonal mass is zero (p = 1 included).
double covariance_shrinkage_intensity(const Matrix& residuals, Index dof);

/// lambda * diag(S) + (1 - lambda) * S.
CovarianceEstimate shrink_covariance(const LabeledDataset& ds);
CovarianceEstimate shrink_covariance(const WithinClassScatter& scatter);

/// Shrinks per-feature variances toward their mean v_bar with an analytic
/// intensity sum_j Var^(v_j) / sum_j (v_j - v_bar)^2 (same moment estimator as
/// above, diagonal terms). Returns the shrunk variances and the intensity.
struct ShrunkVariances {
  Vector variances;
  double intensity = 1.0;
};
ShrunkVariances shrink_variances(const Matrix& residuals, Index dof);

struct SolveResult {
  Vector solution;
  bool pseudo_inverse_used = false;
};

/// Solves M w = v for symmetric M via its eigendecomposition. When the
/// smallest |eigenvalue| is below 1e-10 * max |eigenvalue| the minimum-norm
/// pseudo-inverse solution is returned and flagged. Throws NotSymmetric.
SolveResult solve_spd(const Matrix& M, const Vector& v);

struct EigenPairs {
  /// Descending.
  Vector values;
  /// Column j pairs with values(j); unit norm, first nonzero coordinate > 0.
  Matrix vectors;
};

/// Throws NotSymmetric.
EigenPairs principal_axes(const Matrix& M);

/// Relative symmetry check |M - M'| <= tol * max(1, max|M|).
bool is_symmetric(const Matrix& M, double tol = 1e-12);

}  // namespace sigdet
