#pragma once

#include "sigdet/model.hpp"
#include "sigdet/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sigdet {

enum class CovarianceFamily { Identity, Ar1, Brownian, RandomCorr, HeteroDiag };

struct CovarianceSpec {
  CovarianceFamily kind = CovarianceFamily::Identity;
  Index p = 23;
  double rho = 0.6;                   // ar1
  std::uint64_t seed = 0;             // random_corr: A is drawn once from this seed
};

/// identity: I. ar1: rho^|k-l|. brownian: D^-1 R D^-1 with R_kl = min(k, l).
/// random_corr: A'A (A p x p standard Gaussian) scaled to unit diagonal.
/// hetero_diag: diag(1, ..., p). Throws BadRho for |rho| >= 1.
Matrix make_covariance(const CovarianceSpec& spec);

enum class SignalDirection { ConstantVector, HighestPc, LowestPc, PcIndex };
enum class NormMode { Mahalanobis, Euclidean };

struct SignalSpec {
  SignalDirection direction = SignalDirection::ConstantVector;
  /// 1-based principal-component rank (1 = largest variance) for PcIndex.
  Index pc_index = 1;
  double strength = 0.0;
  NormMode norm = NormMode::Mahalanobis;
};

/// Shift vector mu = a * u with u the all-ones vector or a unit principal
/// axis of sigma, and a chosen so that |mu|^2 = c^2 p in the selected norm.
/// Throws SingularSigma in Mahalanobis mode for singular sigma.
Vector make_signal(const SignalSpec& spec, const Matrix& sigma);

enum class NoiseKind { Gaussian, StudentT };
enum class AlternativeKind { Shift, Mixture };

struct ScenarioConfig {
  std::string name = "scenario";
  Index n = 40;
  Index p = 23;
  NoiseKind noise = NoiseKind::Gaussian;
  double df = 3.0;
  CovarianceSpec covariance;
  AlternativeKind alternative = AlternativeKind::Shift;
  /// Shift alternative: strength is the effect c.
  SignalSpec signal;
  /// Mixture alternative: weight pi in [0, 1/2] and mean amplitude, giving
  /// mu = (amplitude / sqrt(p)) * ones.
  double mixture_pi = 0.0;
  double mixture_amplitude = 3.0;

  int replications = 1000;
  int permutations = 300;
  double alpha = 0.05;
  std::vector<std::string> statistics;
  int folds = 4;
  bool balanced_folds = true;
  bool refold = true;
  bool tie_break = false;
  bool add_one_pvalue = false;
  double hdrda_mix = 0.5;

  double effect() const noexcept {
    return alternative == AlternativeKind::Mixture ? mixture_pi : signal.strength;
  }
  void set_effect(double e) noexcept {
    (alternative == AlternativeKind::Mixture ? mixture_pi : signal.strength) = e;
  }
};

/// Throws ConfigError describing the first invalid field.
void validate_config(const ScenarioConfig& cfg);

/// Covariance, shift and noise factor resolved once per scenario.
class PreparedScenario {
 public:
  explicit PreparedScenario(const ScenarioConfig& cfg);

  const ScenarioConfig& config() const noexcept { return cfg_; }
  const Matrix& sigma() const noexcept { return sigma_; }
  const Vector& shift() const noexcept { return mu_; }

  /// Balanced design (first n/2 rows class 0). Shift: x = mu y + eta.
  /// Mixture: class 1 draws the mu component with probability 1/2 + pi,
  /// class 0 with probability 1/2 - pi. Student-t noise is z / sqrt(w / df)
  /// with w ~ chi^2_df, not rescaled.
  LabeledDataset draw(RngStream& rng) const;

 private:
  ScenarioConfig cfg_;
  Matrix sigma_;
  Matrix factor_;
  Vector mu_;
};

inline LabeledDataset draw_dataset(const ScenarioConfig& cfg, RngStream& rng) {
  return PreparedScenario(cfg).draw(rng);
}

}  // namespace sigdet
