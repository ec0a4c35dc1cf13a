#include "selftest.hpp"

#include "sigdet/classifiers.hpp"
#include "sigdet/location.hpp"
#include "sigdet/permutation.hpp"
#include "sigdet/simgen.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

using namespace sigdet;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)}); }

LabeledDataset random_dataset(Index n, Index p, std::uint64_t seed) {
  RngStream rng = derive_stream(seed, {0});
  FeatureMatrix x(n, p);
  Labels y(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    y[static_cast<std::size_t>(i)] = i < n / 2 ? 0 : 1;
    for (Index j = 0; j < p; ++j) x(i, j) = rng.normal() + 0.3 * y[static_cast<std::size_t>(i)];
  }
  return LabeledDataset(x, y);
}

bool hand_hotelling() {
  FeatureMatrix x(4, 1);
  x << 0, 2, 1, 3;
  const LabeledDataset ds(x, {0, 0, 1, 1});
  return std::abs(location_statistic(ds, {LocationKind::Hotelling, nullptr}) - 0.5) < 1e-14;
}

bool goeman_identity() {
  const auto [a, b] = goeman_equivalence_check(random_dataset(30, 7, 11));
  return rel(a, b) < 1e-12;
}

bool hotelling_affine() {
  const LabeledDataset ds = random_dataset(30, 5, 12);
  RngStream rng = derive_stream(12, {1});
  Matrix A(5, 5);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 5; ++j) A(i, j) = rng.normal() + (i == j ? 3.0 : 0.0);
  Vector b(5);
  for (Index j = 0; j < 5; ++j) b(j) = rng.normal();
  FeatureMatrix y = (ds.features() * A.transpose()).rowwise() + b.transpose();
  const LabeledDataset moved(y, Labels(ds.labels().begin(), ds.labels().end()));
  const LocationStatSpec h{LocationKind::Hotelling, nullptr};
  return rel(location_statistic(ds, h), location_statistic(moved, h)) < 1e-8;
}

bool sd_scalar() {
  const LabeledDataset ds = random_dataset(30, 6, 13);
  FeatureMatrix y = ds.features();
  for (Index j = 0; j < y.cols(); ++j) y.col(j) *= (j % 2 ? -1.0 : 1.0) * std::pow(10.0, static_cast<double>(j) - 3);
  const LabeledDataset scaled(y, Labels(ds.labels().begin(), ds.labels().end()));
  const LocationStatSpec sd{LocationKind::Sd, nullptr};
  return rel(location_statistic(ds, sd), location_statistic(scaled, sd)) < 1e-10;
}

bool svm_gap() {
  for (std::uint64_t k = 0; k < 5; ++k) {
    const LabeledDataset ds = random_dataset(12, 3, 100 + k);
    ClassifierSpec spec{ClassifierFamily::LinearSvm};
    spec.cost = 1.0;
    spec.svm_tolerance = 1e-8;
    const LinearModel m = fit(view_of(ds), spec);
    const double primal = svm_primal_objective(view_of(ds), spec.cost, m.weights, m.bias);
    if (primal - m.info.dual_objective > 1e-6 * (1 + std::abs(primal))) return false;
  }
  return true;
}

bool tie_rule() {
  PermutationReport r;
  r.r = 100;
  r.greater = 4;
  r.equal = 10;
  return std::abs(rejection_probability(r, 0.05, true, PValueMode::PaperExact) - 0.1) < 1e-12;
}

bool thread_determinism(int threads) {
  const LabeledDataset ds = random_dataset(20, 4, 14);
  std::vector<StatisticSpec> stats = {statistic_by_name("Hotelling"), statistic_by_name("lda.CV.1"),
                                      statistic_by_name("svm.CV.1")};
  PermutationOptions opts;
  opts.r = 60;
  opts.keep_null_values = true;
  const RngStream rng = derive_stream(42, {3, 17});
  const PermutationResult a = permutation_test(ds, stats, opts, rng);
  opts.threads = std::max(2, threads);
  const PermutationResult b = permutation_test(ds, stats, opts, rng);
  return a.null_values == b.null_values;
}

bool signal_norm() {
  CovarianceSpec cs;
  cs.kind = CovarianceFamily::Ar1;
  const Matrix sigma = make_covariance(cs);
  SignalSpec s;
  s.direction = SignalDirection::LowestPc;
  s.strength = 0.5;
  const Vector mu = make_signal(s, sigma);
  const double m2 = mu.dot(sigma.ldlt().solve(mu));
  return rel(m2, 0.25 * 23) < 1e-10;
}

}  // namespace

bool run_selftest(std::ostream& out, int threads) {
  const std::vector<std::pair<std::string, std::function<bool()>>> checks = {
      {"hotelling hand value", hand_hotelling},
      {"goeman equals scaled squared distance", goeman_identity},
      {"hotelling affine invariance", hotelling_affine},
      {"sd scalar invariance", sd_scalar},
      {"svm duality gap", svm_gap},
      {"randomized tie rule", tie_rule},
      {"thread-count determinism", [threads] { return thread_determinism(threads); }},
      {"mahalanobis signal norm", signal_norm},
  };
  bool all = true;
  for (const auto& [name, check] : checks) {
    bool ok = false;
    try {
      ok = check();
    } catch (const std::exception& e) {
      out << "error in " << name << ": " << e.what() << "\n";
    }
    out << (ok ? "PASS " : "FAIL ") << name << "\n";
    all = all && ok;
  }
  return all;
}
