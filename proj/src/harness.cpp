#include "sigdet/harness.hpp"

#include "parallel.hpp"

#include <cmath>
#include <limits>

namespace sigdet {

const PowerRow* PowerReport::find(const std::string& statistic, double effect) const {
  for (const auto& row : rows) {
    if (row.statistic == statistic && row.effect == effect) return &row;
  }
  return nullptr;
}

ScenarioFailure::ScenarioFailure(const Error& cause, std::string scenario, double effect, int replication)
    : Error(cause.code(), "scenario '" + scenario + "', effect " + std::to_string(effect) + ", replication " +
                              std::to_string(replication) + ": " + cause.what()),
      scenario_(std::move(scenario)),
      effect_(effect),
      replication_(replication) {}

std::vector<StatisticSpec> resolve_statistics(const ScenarioConfig& cfg, const Matrix& sigma) {
  CatalogOptions opts;
  opts.folds = cfg.folds;
  opts.balanced = cfg.balanced_folds;
  opts.hdrda_mix = cfg.hdrda_mix;
  std::vector<StatisticSpec> stats;
  stats.reserve(cfg.statistics.size());
  for (const auto& name : cfg.statistics) stats.push_back(statistic_by_name(name, opts));
  bind_oracle_sigma(stats, sigma);
  return stats;
}

ReplicationOutcome run_replication(const PreparedScenario& scenario, std::span<const StatisticSpec> stats,
                                   int replication, std::uint64_t master_seed) {
  const ScenarioConfig& cfg = scenario.config();
  const auto rep = static_cast<std::uint64_t>(replication);
  const RngStream root = derive_stream(master_seed, {rep});
  RngStream data_rng = root.child(0);
  const LabeledDataset ds = scenario.draw(data_rng);

  PermutationOptions opts;
  opts.r = cfg.permutations;
  opts.policy = cfg.refold ? RefoldPolicy::RefoldPerPermutation : RefoldPolicy::FixedFolds;
  PermutationResult result = permutation_test(ds, stats, opts, root.child(1));

  const PValueMode mode = cfg.add_one_pvalue ? PValueMode::AddOne : PValueMode::PaperExact;
  ReplicationOutcome out;
  out.decisions.reserve(stats.size());
  for (std::size_t s = 0; s < stats.size(); ++s) {
    RngStream tie_rng = root.child({3, s});
    out.decisions.push_back(decide(result.reports[s], cfg.alpha, cfg.tie_break, tie_rng.uniform(), mode));
  }
  out.reports = std::move(result.reports);
  out.seconds = std::move(result.seconds);
  return out;
}

PowerReport run_scenario(const ScenarioConfig& cfg, std::uint64_t master_seed, int threads) {
  PowerReport report;
  validate_config(cfg);
  if (cfg.replications == 0) return report;
  const PreparedScenario scenario(cfg);
  const std::vector<StatisticSpec> stats = resolve_statistics(cfg, scenario.sigma());
  const auto R = static_cast<std::size_t>(cfg.replications);
  const std::size_t S = stats.size();

  std::vector<char> rejected(R * S, 0);
  std::vector<double> seconds(R * S, 0.0);
  detail::parallel_for(R, threads, [&](std::size_t rep) {
    try {
      const ReplicationOutcome o = run_replication(scenario, stats, static_cast<int>(rep), master_seed);
      for (std::size_t s = 0; s < S; ++s) {
        rejected[rep * S + s] = o.decisions[s].rejected;
        seconds[rep * S + s] = o.seconds[s];
      }
    } catch (const Error& e) {
      throw ScenarioFailure(e, cfg.name, cfg.effect(), static_cast<int>(rep));
    }
  });

  for (std::size_t s = 0; s < S; ++s) {
    PowerRow row;
    row.scenario = cfg.name;
    row.statistic = stats[s].name;
    row.effect = cfg.effect();
    row.replications = cfg.replications;
    row.seed = master_seed;
    double total_seconds = 0.0;
    for (std::size_t rep = 0; rep < R; ++rep) {
      row.rejections += rejected[rep * S + s];
      total_seconds += seconds[rep * S + s];
    }
    row.power = static_cast<double>(row.rejections) / row.replications;
    row.mc_se = std::sqrt(row.power * (1.0 - row.power) / row.replications);
    row.mean_runtime = total_seconds / row.replications;
    report.rows.push_back(std::move(row));
  }
  return report;
}

PowerReport run_grid(const ScenarioConfig& cfg, std::span<const double> effects, std::uint64_t master_seed,
                     int threads) {
  PowerReport report;
  for (double effect : effects) {
    ScenarioConfig at = cfg;
    at.set_effect(effect);
    PowerReport part = run_scenario(at, master_seed, threads);
    report.rows.insert(report.rows.end(), part.rows.begin(), part.rows.end());
  }
  return report;
}

PowerComparison compare_powers(const PowerReport& report, const std::string& stat_a, const std::string& stat_b,
                               double effect) {
  const PowerRow* a = report.find(stat_a, effect);
  const PowerRow* b = report.find(stat_b, effect);
  if (!a || !b) {
    throw Error(ErrorCode::MissingCell, "no row for '" + std::string(a ? stat_b : stat_a) + "' at effect " +
                                            std::to_string(effect));
  }
  PowerComparison c;
  c.difference = a->power - b->power;
  c.se = std::sqrt(a->mc_se * a->mc_se + b->mc_se * b->mc_se);
  if (c.se > 0.0) {
    c.z = c.difference / c.se;
  } else if (c.difference != 0.0) {
    c.z = std::copysign(std::numeric_limits<double>::infinity(), c.difference);
  }
  return c;
}

}  // namespace sigdet
