#include "sigdet/simgen.hpp"

#include "sigdet/stats_kernel.hpp"

#include <cmath>

namespace sigdet {

Matrix make_covariance(const CovarianceSpec& spec) {
  const Index p = spec.p;
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "covariance dimension must be positive");
  Matrix S = Matrix::Identity(p, p);
  switch (spec.kind) {
    case CovarianceFamily::Identity:
      break;
    case CovarianceFamily::Ar1: {
      if (!(std::abs(spec.rho) < 1.0)) throw Error(ErrorCode::BadRho, "rho must lie in (-1, 1)");
      for (Index k = 0; k < p; ++k)
        for (Index l = 0; l < p; ++l) S(k, l) = std::pow(spec.rho, static_cast<double>(std::abs(k - l)));
      break;
    }
    case CovarianceFamily::Brownian: {
      for (Index k = 0; k < p; ++k)
        for (Index l = 0; l < p; ++l) {
          const double kk = static_cast<double>(k + 1), ll = static_cast<double>(l + 1);
          S(k, l) = std::min(kk, ll) / std::sqrt(kk * ll);
        }
      break;
    }
    case CovarianceFamily::RandomCorr: {
      RngStream rng = derive_stream(spec.seed, {0xC0BB, static_cast<std::uint64_t>(p)});
      Matrix A(p, p);
      for (Index i = 0; i < p; ++i)
        for (Index j = 0; j < p; ++j) A(i, j) = rng.normal();
      const Matrix R = A.transpose() * A;
      const Vector inv_sd = R.diagonal().cwiseSqrt().cwiseInverse();
      S = inv_sd.asDiagonal() * R * inv_sd.asDiagonal();
      S = 0.5 * (S + S.transpose());
      S.diagonal().setOnes();
      break;
    }
    case CovarianceFamily::HeteroDiag: {
      S.setZero();
      for (Index j = 0; j < p; ++j) S(j, j) = static_cast<double>(j + 1);
      break;
    }
  }
  return S;
}

Vector make_signal(const SignalSpec& spec, const Matrix& sigma) {
  const Index p = sigma.rows();
  if (spec.strength < 0.0) throw Error(ErrorCode::InvalidArgument, "signal strength must be >= 0");
  const double target = spec.strength * std::sqrt(static_cast<double>(p));  // = sqrt(c^2 p)

  if (spec.direction == SignalDirection::ConstantVector) {
    const Vector e = Vector::Ones(p);
    if (spec.norm == NormMode::Euclidean) return (target / std::sqrt(static_cast<double>(p))) * e;
    const SolveResult s = solve_spd(sigma, e);
    if (s.pseudo_inverse_used) throw Error(ErrorCode::SingularSigma, "Mahalanobis norm needs invertible sigma");
    const double q = e.dot(s.solution);
    return (target / std::sqrt(q)) * e;
  }

  const EigenPairs axes = principal_axes(sigma);
  Index j = 0;
  switch (spec.direction) {
    case SignalDirection::HighestPc: j = 0; break;
    case SignalDirection::LowestPc: j = p - 1; break;
    case SignalDirection::PcIndex:
      if (spec.pc_index < 1 || spec.pc_index > p) {
        throw Error(ErrorCode::InvalidArgument, "principal component index out of range");
      }
      j = spec.pc_index - 1;
      break;
    case SignalDirection::ConstantVector: break;
  }
  const Vector u = axes.vectors.col(j);
  if (spec.norm == NormMode::Euclidean) return target * u;
  const double lam = axes.values(j);
  if (!(lam > 1e-12 * axes.values(0))) {
    throw Error(ErrorCode::SingularSigma, "Mahalanobis norm needs invertible sigma");
  }
  return (target * std::sqrt(lam)) * u;
}

void validate_config(const ScenarioConfig& cfg) {
  auto fail = [&](const std::string& field, const std::string& why) {
    throw Error(ErrorCode::ConfigError, "scenario '" + cfg.name + "': " + field + ": " + why);
  };
  if (cfg.n < kMinObservations) fail("n", "must be at least 4");
  if (cfg.n % 2 != 0) fail("n", "must be even (balanced classes)");
  if (cfg.p < 1) fail("p", "must be positive");
  if (cfg.covariance.p != cfg.p) fail("covariance", "dimension differs from p");
  if (cfg.noise == NoiseKind::StudentT && !(cfg.df > 0.0)) fail("noise.df", "must be positive");
  if (cfg.alternative == AlternativeKind::Mixture && !(cfg.mixture_pi >= 0.0 && cfg.mixture_pi <= 0.5)) {
    fail("mixture.pi", "must lie in [0, 1/2]");
  }
  if (cfg.signal.strength < 0.0) fail("effect", "must be non-negative");
  if (cfg.replications < 0) fail("replications", "must be non-negative");
  if (cfg.permutations < 1) fail("permutations", "must be positive");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) fail("alpha", "must lie in (0, 1)");
  if (cfg.folds < 2 || cfg.folds > cfg.n) fail("folds", "must lie in [2, n]");
  if (cfg.statistics.empty()) fail("statistics", "list is empty");
  if (!(cfg.hdrda_mix >= 0.0 && cfg.hdrda_mix <= 1.0)) fail("hdrda_mix", "must lie in [0, 1]");
}

PreparedScenario::PreparedScenario(const ScenarioConfig& cfg) : cfg_(cfg) {
  validate_config(cfg_);
  sigma_ = make_covariance(cfg_.covariance);
  Eigen::LLT<Matrix> llt(sigma_);
  if (llt.info() == Eigen::Success) {
    factor_ = llt.matrixL();
  } else {
    const EigenPairs axes = principal_axes(sigma_);
    factor_ = axes.vectors * axes.values.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }
  if (cfg_.alternative == AlternativeKind::Mixture) {
    mu_ = Vector::Constant(cfg_.p, cfg_.mixture_amplitude / std::sqrt(static_cast<double>(cfg_.p)));
  } else {
    mu_ = make_signal(cfg_.signal, sigma_);
  }
}

LabeledDataset PreparedScenario::draw(RngStream& rng) const {
  const Index n = cfg_.n;
  const Index p = cfg_.p;
  FeatureMatrix X(n, p);
  Labels y(static_cast<std::size_t>(n));
  Vector z(p);
  for (Index i = 0; i < n; ++i) {
    const int label = i < n / 2 ? 0 : 1;
    y[static_cast<std::size_t>(i)] = label;
    for (Index j = 0; j < p; ++j) z(j) = rng.normal();
    Vector eta = factor_ * z;
    if (cfg_.noise == NoiseKind::StudentT) eta /= std::sqrt(rng.chi_squared(cfg_.df) / cfg_.df);

    bool shifted = false;
    if (cfg_.alternative == AlternativeKind::Mixture) {
      const double w = label == 1 ? 0.5 + cfg_.mixture_pi : 0.5 - cfg_.mixture_pi;
      shifted = rng.uniform() < w;
    } else {
      shifted = label == 1;
    }
    X.row(i) = (shifted ? Vector(eta + mu_) : eta).transpose();
  }
  return LabeledDataset(X, std::move(y));
}

}  // namespace sigdet
