#pragma once

#include "sigdet/permutation.hpp"
#include "sigdet/simgen.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sigdet {

struct PowerRow {
  std::string scenario;
  std::string statistic;
  double effect = 0.0;
  int rejections = 0;
  int replications = 0;
  double power = 0.0;
  /// sqrt(power (1 - power) / replications).
  double mc_se = 0.0;
  /// Mean seconds per replication spent evaluating this statistic.
  double mean_runtime = 0.0;
  std::uint64_t seed = 0;
};

struct PowerReport {
  std::vector<PowerRow> rows;

  const PowerRow* find(const std::string& statistic, double effect) const;
};

/// A failure inside a scenario, tagged with where it happened.
class ScenarioFailure : public Error {
 public:
  ScenarioFailure(const Error& cause, std::string scenario, double effect, int replication);
  const std::string& scenario() const noexcept { return scenario_; }
  double effect() const noexcept { return effect_; }
  int replication() const noexcept { return replication_; }

 private:
  std::string scenario_;
  double effect_;
  int replication_;
};

/// Statistics of a scenario resolved from their catalog names, with the
/// oracle bound to the generative covariance.
std::vector<StatisticSpec> resolve_statistics(const ScenarioConfig& cfg, const Matrix& sigma);

struct ReplicationOutcome {
  std::vector<PermutationReport> reports;
  std::vector<TestDecision> decisions;
  std::vector<double> seconds;
};

/// One replication: draw with child {rep, 0}, permute with child {rep, 1},
/// tie-break uniforms from child {rep, 3, s}, all under master_seed.
ReplicationOutcome run_replication(const PreparedScenario& scenario, std::span<const StatisticSpec> stats,
                                   int replication, std::uint64_t master_seed);

/// Runs cfg at its current effect. Deterministic in master_seed for any
/// thread count. Rows follow cfg.statistics order; no rows when
/// cfg.replications == 0.
PowerReport run_scenario(const ScenarioConfig& cfg, std::uint64_t master_seed, int threads = 1);

/// Runs cfg once per effect level with the same master seed, so effect levels
/// share noise draws and permutations.
PowerReport run_grid(const ScenarioConfig& cfg, std::span<const double> effects, std::uint64_t master_seed,
                     int threads = 1);

struct PowerComparison {
  double difference = 0.0;
  double se = 0.0;
  double z = 0.0;
};

/// power(a) - power(b) at one effect level with the unpaired standard error
/// sqrt(se_a^2 + se_b^2). Rows come from a shared-permutation design, which
/// is positively correlated, so this overstates the paired error. Throws
/// MissingCell.
PowerComparison compare_powers(const PowerReport& report, const std::string& stat_a, const std::string& stat_b,
                               double effect);

}  // namespace sigdet
