#include "sigdet/stats_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace sigdet {

namespace {

constexpr double kRankTol = 1e-10;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Sign convention: the first coordinate that is nonzero (beyond rounding)
// is made positive.
void fix_sign(Eigen::Ref<Vector> v) {
  const double scale = v.cwiseAbs().maxCoeff();
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12 * scale) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

// Cholesky solve for a matrix that is certainly nonsingular at kRankTol:
// lambda_min >= 1 / tr(M^-1) > kRankTol tr(M) >= kRankTol lambda_max.
// Empty when the certificate fails; callers then take the eigen path.
std::optional<Vector> certified_solve(const Matrix& M, const Vector& v) {
  const Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Matrix Linv = llt.matrixL().solve(Matrix::Identity(M.rows(), M.cols()));
  const double trace_inv = Linv.squaredNorm();
  if (!(1.0 / trace_inv > kRankTol * M.trace())) return std::nullopt;
  return llt.solve(v);
}

}  // namespace

SampleView view_of(const LabeledDataset& ds) noexcept {
  return SampleView{&ds.features(), ds.labels(), {}};
}

bool is_symmetric(const Matrix& M, double tol) {
  if (M.rows() != M.cols()) return false;
  const double scale = M.size() ? M.cwiseAbs().maxCoeff() : 0.0;
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

GroupSummary group_summary(const SampleView& view) {
  const Index p = view.features->cols();
  GroupSummary g;
  g.mean0 = Vector::Zero(p);
  g.mean1 = Vector::Zero(p);
  for (Index k = 0; k < view.size(); ++k) {
    const auto x = view.features->row(view.row(k)).transpose();
    if (view.label_at(k) == 1) {
      g.mean1 += x;
      ++g.n1;
    } else {
      g.mean0 += x;
      ++g.n0;
    }
  }
  if (g.n0 > 0) g.mean0 /= static_cast<double>(g.n0);
  if (g.n1 > 0) g.mean1 /= static_cast<double>(g.n1);
  g.diff = g.mean1 - g.mean0;
  return g;
}

GroupSummary group_summary(const LabeledDataset& ds) { return group_summary(view_of(ds)); }

WithinClassScatter::WithinClassScatter(const SampleView& view) : summary_(group_summary(view)) {
  const Index m = view.size();
  residuals_.resize(m, view.features->cols());
  for (Index k = 0; k < m; ++k) {
    const auto x = view.features->row(view.row(k));
    residuals_.row(k) = x - (view.label_at(k) == 1 ? summary_.mean1 : summary_.mean0).transpose();
  }
}

WithinClassScatter::WithinClassScatter(const LabeledDataset& ds) : WithinClassScatter(view_of(ds)) {}

Matrix WithinClassScatter::covariance() const {
  const Index p = residuals_.cols();
  if (dof() <= 0) return Matrix::Zero(p, p);
  Matrix S = Matrix::Zero(p, p);
  S.selfadjointView<Eigen::Lower>().rankUpdate(residuals_.transpose(), 1.0 / static_cast<double>(dof()));
  S.triangularView<Eigen::StrictlyUpper>() = S.transpose();
  return S;
}

Vector WithinClassScatter::variances() const {
  if (dof() <= 0) return Vector::Zero(residuals_.cols());
  return residuals_.colwise().squaredNorm().transpose() / static_cast<double>(dof());
}

ScatterSolve WithinClassScatter::solve(const Vector& d) const {
  const Index p = residuals_.cols();
  const Index m = residuals_.rows();
  ScatterSolve out;
  out.range_part = Vector::Zero(p);
  out.null_part = d;
  if (dof() <= 0 || m == 0) {
    out.rank_deficient = true;
    return out;
  }
  const double inv_dof = 1.0 / static_cast<double>(dof());

  if (p <= m) {
    const Matrix S = covariance();
    if (auto w = certified_solve(S, d)) {
      out.range_part = std::move(*w);
      out.null_part.setZero();
      out.rank = p;
      return out;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
    const Vector& lam = eig.eigenvalues();
    const double tol = kRankTol * lam.cwiseAbs().maxCoeff();
    const Vector proj = eig.eigenvectors().transpose() * d;
    Vector coef = Vector::Zero(p);
    Vector keep = Vector::Zero(p);
    for (Index j = 0; j < p; ++j) {
      if (lam(j) > tol && lam(j) > 0.0) {
        coef(j) = proj(j) / lam(j);
        keep(j) = proj(j);
        ++out.rank;
      }
    }
    out.range_part = eig.eigenvectors() * coef;
    out.null_part = d - eig.eigenvectors() * keep;
  } else {
    // S = R'R / dof. With G = R R' = U L U', the nonzero spectrum of S is
    // L / dof with axes v_i = R' u_i / sqrt(L_i).
    Matrix G = Matrix::Zero(m, m);
    G.selfadjointView<Eigen::Lower>().rankUpdate(residuals_, 1.0);
    G.triangularView<Eigen::StrictlyUpper>() = G.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(G);
    const Vector& lam = eig.eigenvalues();
    const double tol = kRankTol * lam.cwiseAbs().maxCoeff();
    const Vector Rd = residuals_ * d;
    const Vector proj = eig.eigenvectors().transpose() * Rd;  // sqrt(L_i) * v_i'd
    Vector coef_range = Vector::Zero(m);
    Vector coef_keep = Vector::Zero(m);
    for (Index j = 0; j < m; ++j) {
      if (lam(j) > tol && lam(j) > 0.0) {
        // v_i (v_i'd) / (L_i/dof) = R'u_i * proj_i / (L_i^2 * inv_dof)
        coef_range(j) = proj(j) / (lam(j) * lam(j) * inv_dof);
        coef_keep(j) = proj(j) / lam(j);
        ++out.rank;
      }
    }
    out.range_part = residuals_.transpose() * (eig.eigenvectors() * coef_range);
    out.null_part = d - residuals_.transpose() * (eig.eigenvectors() * coef_keep);
  }
  out.rank_deficient = out.rank < p;
  if (!out.rank_deficient) out.null_part.setZero();
  return out;
}

CovarianceEstimate pooled_covariance(const LabeledDataset& ds) {
  WithinClassScatter scatter(ds);
  if (scatter.dof() <= 0) throw Error(ErrorCode::DegenerateClass, "pooled covariance needs n - 2 >= 1");
  return CovarianceEstimate{scatter.covariance(), CovarianceKind::Pooled, std::nullopt};
}

double covariance_shrinkage_intensity(const Matrix& residuals, Index dof) {
  const Index m = residuals.rows();
  const Index p = residuals.cols();
  if (p < 2 || m < 2 || dof <= 0) return 1.0;
  const double factor = static_cast<double>(m) / (static_cast<double>(m - 1) * static_cast<double>(dof) *
                                                  static_cast<double>(dof));
  double var_sum = 0.0;
  double sq_sum = 0.0;
  Vector w(m);
  for (Index j = 1; j < p; ++j) {
    for (Index i = 0; i < j; ++i) {
      w = residuals.col(i).cwiseProduct(residuals.col(j));
      const double total = w.sum();
      const double mean = total / static_cast<double>(m);
      const double s_ij = total / static_cast<double>(dof);
      var_sum += factor * (w.array() - mean).square().sum();
      sq_sum += s_ij * s_ij;
    }
  }
  if (!(sq_sum > 0.0)) return 1.0;
  return clamp01(var_sum / sq_sum);
}

CovarianceEstimate shrink_covariance(const WithinClassScatter& scatter) {
  Matrix S = scatter.covariance();
  const double lambda = covariance_shrinkage_intensity(scatter.residuals(), scatter.dof());
  Matrix shrunk = (1.0 - lambda) * S;
  shrunk.diagonal() = S.diagonal();
  return CovarianceEstimate{std::move(shrunk), CovarianceKind::Shrunk, lambda};
}

CovarianceEstimate shrink_covariance(const LabeledDataset& ds) {
  return shrink_covariance(WithinClassScatter(ds));
}

ShrunkVariances shrink_variances(const Matrix& residuals, Index dof) {
  const Index m = residuals.rows();
  const Index p = residuals.cols();
  ShrunkVariances out;
  if (dof <= 0 || m < 2) {
    out.variances = Vector::Zero(p);
    return out;
  }
  const double factor = static_cast<double>(m) / (static_cast<double>(m - 1) * static_cast<double>(dof) *
                                                  static_cast<double>(dof));
  Vector v(p);
  double var_sum = 0.0;
  for (Index j = 0; j < p; ++j) {
    const auto w = residuals.col(j).array().square();
    const double total = w.sum();
    v(j) = total / static_cast<double>(dof);
    var_sum += factor * (w - total / static_cast<double>(m)).square().sum();
  }
  const double target = v.mean();
  const double spread = (v.array() - target).square().sum();
  out.intensity = spread > 0.0 ? clamp01(var_sum / spread) : 1.0;
  out.variances = (1.0 - out.intensity) * v.array() + out.intensity * target;
  return out;
}

SolveResult solve_spd(const Matrix& M, const Vector& v) {
  if (!is_symmetric(M)) throw Error(ErrorCode::NotSymmetric, "solve_spd needs a symmetric matrix");
  if (M.rows() != v.size()) throw Error(ErrorCode::DimensionMismatch, "solve_spd: size mismatch");
  if (M.size() > 0) {
    if (auto w = certified_solve(M, v)) return SolveResult{std::move(*w), false};
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
  const Vector& lam = eig.eigenvalues();
  const double tol = kRankTol * (lam.size() ? lam.cwiseAbs().maxCoeff() : 0.0);
  const Vector proj = eig.eigenvectors().transpose() * v;
  Vector coef = Vector::Zero(lam.size());
  bool pseudo = false;
  for (Index j = 0; j < lam.size(); ++j) {
    if (std::abs(lam(j)) > tol && lam(j) != 0.0) {
      coef(j) = proj(j) / lam(j);
    } else {
      pseudo = true;
    }
  }
  return SolveResult{eig.eigenvectors() * coef, pseudo};
}

EigenPairs principal_axes(const Matrix& M) {
  if (!is_symmetric(M)) throw Error(ErrorCode::NotSymmetric, "principal_axes needs a symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
  const Index p = M.rows();
  EigenPairs out;
  out.values = eig.eigenvalues().reverse();
  out.vectors = eig.eigenvectors().rowwise().reverse();
  for (Index j = 0; j < p; ++j) fix_sign(out.vectors.col(j));
  return out;
}

}  // namespace sigdet
