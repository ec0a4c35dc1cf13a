#include "sigdet/location.hpp"

#include "sigdet/stats_kernel.hpp"

namespace sigdet {

std::string_view to_string(LocationKind kind) noexcept {
  switch (kind) {
    case LocationKind::Oracle: return "oracle";
    case LocationKind::Hotelling: return "hotelling";
    case LocationKind::HotellingShrink: return "hotelling_shrink";
    case LocationKind::Goeman: return "goeman";
    case LocationKind::Sd: return "sd";
  }
  return "?";
}

LocationStatSpec make_oracle_spec(Matrix sigma) {
  if (!is_symmetric(sigma)) throw Error(ErrorCode::NotSymmetric, "oracle sigma must be symmetric");
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularSigma, "oracle sigma must be positive definite");
  }
  return LocationStatSpec{LocationKind::Oracle, std::make_shared<const Matrix>(std::move(sigma))};
}

LocationResult evaluate_location(const LabeledDataset& ds, const LocationStatSpec& spec) {
  const double scale =
      static_cast<double>(ds.n0()) * static_cast<double>(ds.n1()) / static_cast<double>(ds.n());
  LocationResult out;
  switch (spec.kind) {
    case LocationKind::Goeman: {
      const GroupSummary g = group_summary(ds);
      out.value = scale * g.diff.squaredNorm();
      break;
    }
    case LocationKind::Oracle: {
      if (!spec.oracle_sigma) throw Error(ErrorCode::MissingOracleSigma, "oracle statistic needs sigma");
      if (spec.oracle_sigma->rows() != ds.p()) {
        throw Error(ErrorCode::DimensionMismatch, "oracle sigma dimension differs from p");
      }
      const GroupSummary g = group_summary(ds);
      const SolveResult s = solve_spd(*spec.oracle_sigma, g.diff);
      out.value = scale * g.diff.dot(s.solution);
      out.pseudo_inverse_used = s.pseudo_inverse_used;
      break;
    }
    case LocationKind::Hotelling: {
      const WithinClassScatter scatter(ds);
      const Vector& d = scatter.summary().diff;
      const ScatterSolve s = scatter.solve(d);
      out.value = scale * d.dot(s.range_part);
      out.pseudo_inverse_used = s.rank_deficient;
      break;
    }
    case LocationKind::HotellingShrink: {
      const WithinClassScatter scatter(ds);
      const Vector& d = scatter.summary().diff;
      const CovarianceEstimate shrunk = shrink_covariance(scatter);
      const SolveResult s = solve_spd(shrunk.matrix, d);
      out.value = scale * d.dot(s.solution);
      out.pseudo_inverse_used = s.pseudo_inverse_used;
      out.shrinkage_weight = shrunk.shrinkage_weight;
      break;
    }
    case LocationKind::Sd: {
      const WithinClassScatter scatter(ds);
      const Vector& d = scatter.summary().diff;
      const Vector v = scatter.variances();
      double acc = 0.0;
      for (Index j = 0; j < d.size(); ++j) {
        if (v(j) > 0.0) {
          acc += d(j) * d(j) / v(j);
        } else {
          ++out.dropped_coordinates;
        }
      }
      out.value = scale * acc;
      break;
    }
  }
  return out;
}

std::pair<double, double> goeman_equivalence_check(const LabeledDataset& ds) {
  const double stat = location_statistic(ds, LocationStatSpec{LocationKind::Goeman, nullptr});
  // Independent path: explicit per-coordinate class sums.
  const Index p = ds.p();
  double norm2 = 0.0;
  for (Index j = 0; j < p; ++j) {
    double s0 = 0.0, s1 = 0.0;
    for (Index i = 0; i < ds.n(); ++i) (ds.label(i) == 1 ? s1 : s0) += ds.features()(i, j);
    const double dj = s1 / static_cast<double>(ds.n1()) - s0 / static_cast<double>(ds.n0());
    norm2 += dj * dj;
  }
  const double scale =
      static_cast<double>(ds.n0()) * static_cast<double>(ds.n1()) / static_cast<double>(ds.n());
  return {stat, scale * norm2};
}

}  // namespace sigdet
