#include "sigdet/permutation.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>

namespace sigdet {

double canonical_round(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x == 0.0 ? 0.0 : x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return std::strtod(buf, nullptr);
}

PermutationResult permutation_test(const LabeledDataset& ds, std::span<const StatisticSpec> statistics,
                                   const PermutationOptions& options, const RngStream& rng) {
  if (options.r < 1) throw Error(ErrorCode::InvalidArgument, "need at least one permutation");
  const std::size_t S = statistics.size();
  const auto R = static_cast<std::size_t>(options.r);

  // Folds drawn on the observed labelling, reused under FixedFolds.
  std::vector<std::optional<FoldAssignment>> fixed(S);
  std::vector<double> observed(S);
  std::vector<double> seconds(S, 0.0);
  using Clock = std::chrono::steady_clock;
  auto elapsed = [](Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };
  for (std::size_t s = 0; s < S; ++s) {
    RngStream resample = rng.child({2, 0, s});
    const FoldAssignment* folds = nullptr;
    if (options.policy == RefoldPolicy::FixedFolds && statistics[s].uses_folds()) {
      const auto& acc = std::get<AccuracyStatSpec>(statistics[s].kind);
      fixed[s] = make_folds(ds, acc.folds, acc.balanced, resample);
      folds = &*fixed[s];
    }
    const auto t0 = Clock::now();
    observed[s] = evaluate_statistic(statistics[s], ds, resample, folds);
    seconds[s] += elapsed(t0);
  }

  // values[j * S + s]
  std::vector<double> values(R * S);
  std::vector<double> times(R * S);
  detail::parallel_for(R, options.threads, [&](std::size_t jj) {
    const std::uint64_t j = jj + 1;
    Labels labels(ds.labels().begin(), ds.labels().end());
    RngStream perm = rng.child({1, j});
    perm.shuffle(std::span<int>(labels));
    const LabeledDataset permuted = ds.with_labels(std::move(labels));
    for (std::size_t s = 0; s < S; ++s) {
      RngStream resample = rng.child({2, j, s});
      const auto t0 = Clock::now();
      values[jj * S + s] = evaluate_statistic(statistics[s], permuted, resample, fixed[s] ? &*fixed[s] : nullptr);
      times[jj * S + s] = elapsed(t0);
    }
  });

  PermutationResult out;
  out.reports.resize(S);
  if (options.keep_null_values) out.null_values.assign(S, std::vector<double>(R));
  for (std::size_t s = 0; s < S; ++s) {
    PermutationReport& rep = out.reports[s];
    rep.observed = observed[s];
    rep.r = options.r;
    const double t = canonical_round(observed[s]);
    for (std::size_t j = 0; j < R; ++j) {
      const double v = values[j * S + s];
      const double tv = canonical_round(v);
      rep.greater += (tv > t);
      rep.equal += (tv == t);
      if (options.keep_null_values) out.null_values[s][j] = v;
      seconds[s] += times[j * S + s];
    }
  }
  out.seconds = std::move(seconds);
  return out;
}

PermutationReport permutation_test(const LabeledDataset& ds, const StatisticSpec& statistic, int r,
                                   RefoldPolicy policy, const RngStream& rng) {
  PermutationOptions opts;
  opts.r = r;
  opts.policy = policy;
  return permutation_test(ds, std::span<const StatisticSpec>(&statistic, 1), opts, rng).reports.front();
}

double p_value(const PermutationReport& report, PValueMode mode) noexcept {
  return mode == PValueMode::PaperExact ? report.p_value_paper() : report.p_value_add_one();
}

double rejection_probability(const PermutationReport& report, double alpha, bool tie_break, PValueMode mode) {
  if (p_value(report, mode) <= alpha) return 1.0;
  if (!tie_break) return 0.0;
  double total = report.r;
  double greater = report.greater;
  double equal = report.equal;
  if (mode == PValueMode::AddOne) {
    total += 1.0;
    equal += 1.0;
  }
  if (equal <= 0.0) return 0.0;
  return std::max((alpha - greater / total) / (equal / total), 0.0);
}

TestDecision decide(const PermutationReport& report, double alpha, bool tie_break, double u, PValueMode mode) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  TestDecision d;
  d.alpha = alpha;
  d.p_value = p_value(report, mode);
  if (d.p_value <= alpha) {
    d.rejected = true;
    return d;
  }
  const double prob = rejection_probability(report, alpha, tie_break, mode);
  if (tie_break && prob > 0.0) {
    d.tie_randomization_used = true;
    d.rejected = u < prob;
  }
  return d;
}

}  // namespace sigdet
