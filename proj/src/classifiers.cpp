#include "sigdet/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sigdet {

std::string_view to_string(ClassifierFamily family) noexcept {
  switch (family) {
    case ClassifierFamily::Lda: return "lda";
    case ClassifierFamily::Dlda: return "dlda";
    case ClassifierFamily::Sdlda: return "sdlda";
    case ClassifierFamily::Hdrda: return "hdrda";
    case ClassifierFamily::LinearSvm: return "linear_svm";
  }
  return "?";
}

namespace {

constexpr int kFreeSetEvery = 4;
constexpr double kFreeSetStart = 0.5;

// Null-space components smaller than this (relative to |d|) are rounding.
constexpr double kNullTol = 1e-9;

struct Direction {
  Vector w;
  bool null_space = false;
  bool pseudo = false;
};

// Decides between the regular solution and the eps -> 0 ridge limit.
Direction pick_direction(const Vector& range_part, const Vector& null_part, bool rank_deficient,
                         const Vector& d) {
  Direction out;
  out.pseudo = rank_deficient;
  if (rank_deficient && null_part.norm() > kNullTol * d.norm()) {
    out.w = null_part;
    out.null_space = true;
  } else {
    out.w = range_part;
  }
  return out;
}

Direction diagonal_direction(const Vector& variances, const Vector& d) {
  const Index p = d.size();
  const double vmax = p ? variances.maxCoeff() : 0.0;
  const double tol = 1e-10 * vmax;
  Vector range = Vector::Zero(p);
  Vector null = Vector::Zero(p);
  bool deficient = false;
  for (Index j = 0; j < p; ++j) {
    if (variances(j) > tol && variances(j) > 0.0) {
      range(j) = d(j) / variances(j);
    } else {
      null(j) = d(j);
      deficient = true;
    }
  }
  return pick_direction(range, null, deficient, d);
}

LinearModel discriminant_model(const GroupSummary& g, const Direction& dir, Index p) {
  LinearModel model;
  model.weights = dir.w;
  const Vector mid = 0.5 * (g.mean0 + g.mean1);
  model.bias = -model.weights.dot(mid);
  if (!dir.null_space) {
    model.bias += std::log(static_cast<double>(g.n1) / static_cast<double>(g.n0));
  }
  model.trained_p = p;
  model.info.pseudo_inverse_used = dir.pseudo;
  model.info.null_space_direction = dir.null_space;
  return model;
}

LinearModel fit_discriminant(const SampleView& view, const ClassifierSpec& spec) {
  const WithinClassScatter scatter(view);
  const GroupSummary& g = scatter.summary();
  const Index p = scatter.p();
  const Vector& d = g.diff;
  switch (spec.family) {
    case ClassifierFamily::Lda: {
      const ScatterSolve s = scatter.solve(d);
      return discriminant_model(g, pick_direction(s.range_part, s.null_part, s.rank_deficient, d), p);
    }
    case ClassifierFamily::Dlda:
      return discriminant_model(g, diagonal_direction(scatter.variances(), d), p);
    case ClassifierFamily::Sdlda: {
      const ShrunkVariances sv = shrink_variances(scatter.residuals(), scatter.dof());
      LinearModel model = discriminant_model(g, diagonal_direction(sv.variances, d), p);
      model.info.shrinkage_weight = sv.intensity;
      return model;
    }
    case ClassifierFamily::Hdrda: {
      const double mix = spec.hdrda_mix;
      Matrix M = (1.0 - mix) * scatter.covariance();
      const double level = mix * scatter.variances().sum() / static_cast<double>(p);
      M.diagonal().array() += level;
      Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
      const Vector& lam = eig.eigenvalues();
      const double tol = 1e-10 * lam.cwiseAbs().maxCoeff();
      const Vector proj = eig.eigenvectors().transpose() * d;
      Vector range = Vector::Zero(p), keep = Vector::Zero(p);
      bool deficient = false;
      for (Index j = 0; j < p; ++j) {
        if (lam(j) > tol && lam(j) > 0.0) {
          range(j) = proj(j) / lam(j);
        } else {
          keep(j) = proj(j);
          deficient = true;
        }
      }
      LinearModel model = discriminant_model(
          g, pick_direction(eig.eigenvectors() * range, eig.eigenvectors() * keep, deficient, d), p);
      model.info.shrinkage_weight = mix;
      return model;
    }
    case ClassifierFamily::LinearSvm:
      break;
  }
  throw Error(ErrorCode::InvalidArgument, "not a discriminant family");
}

// Dual coordinate descent for the L1-loss linear SVM (Hsieh et al. 2008)
// without shrinking. Dual: min 0.5 a'Qa - e'a, 0 <= a_i <= C, with
// Q_ij = y_i y_j x~_i'x~_j and x~ = (x, 1).
// Active-set step on the free coordinates F (bounded ones held fixed) of
// min 0.5 a'Qa - sum(a) over the box. If Q_FF is singular and the ones
// vector has a component in its null space, alpha moves along it (the
// objective falls linearly) until a coordinate hits its bound; otherwise
// toward the minimiser over F, Q_FF a_F = -grad_F + Q_FF a_F, with an exact
// line search clipped to the box. G is updated to match.
void free_set_step(const Matrix& Q, const Vector& upper, Vector& alpha, Vector& G) {
  const Index m = Q.rows();
  std::vector<Index> free;
  for (Index i = 0; i < m; ++i) {
    if (alpha(i) > 0.0 && alpha(i) < upper(i)) free.push_back(i);
  }
  const auto f = static_cast<Index>(free.size());
  if (f == 0) return;
  Matrix K(f, f);
  Vector grad(f), af(f);
  for (Index a = 0; a < f; ++a) {
    const Index i = free[static_cast<std::size_t>(a)];
    grad(a) = G(i);
    af(a) = alpha(i);
    for (Index b = 0; b < f; ++b) K(a, b) = Q(i, free[static_cast<std::size_t>(b)]);
  }

  Vector dir;
  bool ray = false;
  const Eigen::LLT<Matrix> llt(K);
  const double kmax = K.diagonal().maxCoeff();
  if (llt.info() == Eigen::Success && llt.matrixLLT().diagonal().minCoeff() > 1e-6 * std::sqrt(kmax)) {
    dir = -llt.solve(grad);
  } else {
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(K);
    const Vector& lam = eig.eigenvalues();
    const double tol = 1e-10 * std::max(1.0, lam.maxCoeff()) * static_cast<double>(f);
    Vector null_ones = Vector::Zero(f);
    Vector newton = Vector::Zero(f);
    for (Index j = 0; j < f; ++j) {
      const auto v = eig.eigenvectors().col(j);
      if (lam(j) <= tol) {
        null_ones += v.sum() * v;
      } else {
        newton -= (v.dot(grad) / lam(j)) * v;
      }
    }
    ray = null_ones.lpNorm<Eigen::Infinity>() > 1e-9;
    dir = ray ? null_ones : newton;
  }

  double t = std::numeric_limits<double>::infinity();
  if (!ray) {
    const double slope = grad.dot(dir);
    const double curvature = dir.dot(K * dir);
    if (!(slope < 0.0) || !(curvature > 0.0)) return;
    t = -slope / curvature;
  }
  Index hit = -1;
  for (Index a = 0; a < f; ++a) {
    const double u = upper(free[static_cast<std::size_t>(a)]);
    double ta = t;
    if (dir(a) < 0.0) ta = -af(a) / dir(a);
    if (dir(a) > 0.0) ta = (u - af(a)) / dir(a);
    if (ta < t) {
      t = ta;
      hit = a;
    }
  }
  if (!(t > 0.0) || !std::isfinite(t)) return;
  for (Index a = 0; a < f; ++a) {
    const Index i = free[static_cast<std::size_t>(a)];
    double next = std::clamp(af(a) + t * dir(a), 0.0, upper(i));
    if (a == hit) next = dir(a) < 0.0 ? 0.0 : upper(i);
    const double delta = next - alpha(i);
    alpha(i) = next;
    if (delta != 0.0) G.noalias() += delta * Q.col(i);
  }
}

LinearModel fit_svm(const SampleView& view, const ClassifierSpec& spec) {
  const Index p = view.features->cols();
  const Index q = p + 1;
  const double C = spec.cost;
  if (!(C > 0.0)) throw Error(ErrorCode::InvalidArgument, "svm cost must be positive");

  // Repeated rows (bootstrap samples) are merged into one point whose box
  // bound is C times its multiplicity; the primal problem is unchanged.
  std::vector<Index> distinct;
  std::vector<double> weight;
  {
    std::vector<std::pair<Index, Index>> order;
    order.reserve(static_cast<std::size_t>(view.size()));
    for (Index k = 0; k < view.size(); ++k) order.push_back({view.row(k), k});
    std::sort(order.begin(), order.end());
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (k > 0 && order[k].first == order[k - 1].first) {
        weight.back() += 1.0;
      } else {
        distinct.push_back(order[k].first);
        weight.push_back(1.0);
      }
    }
  }
  const auto m = static_cast<Index>(distinct.size());

  // Rows z_i = y_i (x_i, 1).
  FeatureMatrix z(m, q);
  Vector upper(m);
  for (Index k = 0; k < m; ++k) {
    const Index row = distinct[static_cast<std::size_t>(k)];
    const double y = view.labels[static_cast<std::size_t>(row)] == 1 ? 1.0 : -1.0;
    z.row(k).head(p) = y * view.features->row(row);
    z(k, p) = y;
    upper(k) = C * weight[static_cast<std::size_t>(k)];
  }
  // Dual gradient G = Q alpha - 1 with Q = z z', kept current after each
  // coordinate update so a sweep needs no dot products.
  const Matrix Q = z * z.transpose();
  Vector alpha = Vector::Zero(m);
  Vector G = Vector::Constant(m, -1.0);
  int epoch = 0;
  bool converged = false;
  while (epoch < spec.svm_max_epochs) {
    ++epoch;
    double max_violation = 0.0;
    for (Index i = 0; i < m; ++i) {
      const double g = G(i);
      double pg = g;
      if (alpha(i) <= 0.0) {
        pg = std::min(g, 0.0);
      } else if (alpha(i) >= upper(i)) {
        pg = std::max(g, 0.0);
      }
      max_violation = std::max(max_violation, std::abs(pg));
      if (pg != 0.0 && Q(i, i) > 0.0) {
        const double old = alpha(i);
        alpha(i) = std::clamp(old - g / Q(i, i), 0.0, upper(i));
        const double delta = alpha(i) - old;
        if (delta != 0.0) G.noalias() += delta * Q.col(i);
      }
    }
    if (max_violation < spec.svm_tolerance) {
      converged = true;
      break;
    }
    if (epoch % kFreeSetEvery == 0 && max_violation < kFreeSetStart) free_set_step(Q, upper, alpha, G);
  }
  const Vector w = z.transpose() * alpha;

  LinearModel model;
  model.weights = w.head(p);
  model.bias = w(p);
  model.trained_p = p;
  model.info.converged = converged;
  model.info.epochs = epoch;
  double hinge = 0.0;
  for (Index k = 0; k < m; ++k) hinge += weight[static_cast<std::size_t>(k)] * std::max(0.0, 1.0 - z.row(k).dot(w));
  model.info.primal_objective = 0.5 * w.squaredNorm() + C * hinge;
  model.info.dual_objective = alpha.sum() - 0.5 * w.squaredNorm();
  return model;
}

}  // namespace

LinearModel fit(const SampleView& view, const ClassifierSpec& spec) {
  Index n0 = 0, n1 = 0;
  for (Index k = 0; k < view.size(); ++k) (view.label_at(k) == 1 ? n1 : n0) += 1;
  if (n0 == 0 || n1 == 0) {
    throw Error(ErrorCode::SingleClassTrainingSet, "training sample holds a single class");
  }
  LinearModel model =
      spec.family == ClassifierFamily::LinearSvm ? fit_svm(view, spec) : fit_discriminant(view, spec);
  model.trained_n = n0 + n1;
  model.trained_n0 = n0;
  model.trained_n1 = n1;
  if (!model.weights.allFinite() || !std::isfinite(model.bias)) {
    throw Error(ErrorCode::NonFinite, "classifier fit produced non-finite parameters");
  }
  return model;
}

LinearModel fit(const LabeledDataset& ds, const ClassifierSpec& spec, RngStream& /*rng*/) {
  return fit(view_of(ds), spec);
}

int predict(const LinearModel& model, const Eigen::Ref<const Vector>& x) {
  if (x.size() != model.weights.size()) {
    throw Error(ErrorCode::DimensionMismatch, "feature vector length differs from model");
  }
  return model.weights.dot(x) + model.bias >= 0.0 ? 1 : 0;
}

double svm_primal_objective(const SampleView& view, double cost, const Vector& weights, double bias) {
  double hinge = 0.0;
  for (Index k = 0; k < view.size(); ++k) {
    const double y = view.label_at(k) == 1 ? 1.0 : -1.0;
    const double margin = y * (view.features->row(view.row(k)).dot(weights) + bias);
    hinge += std::max(0.0, 1.0 - margin);
  }
  return 0.5 * (weights.squaredNorm() + bias * bias) + cost * hinge;
}

}  // namespace sigdet
