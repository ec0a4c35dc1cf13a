#include "sigdet/accuracy.hpp"

#include <algorithm>
#include <numeric>

namespace sigdet {

std::string_view to_string(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::Resub: return "resub";
    case EstimatorKind::Vfold: return "vfold";
    case EstimatorKind::Bloo: return "bloo";
  }
  return "?";
}

FoldAssignment make_folds(std::span<const int> labels, int V, bool balanced, RngStream& rng) {
  const auto n = labels.size();
  if (V < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 folds");
  if (static_cast<std::size_t>(V) > n) {
    throw Error(ErrorCode::TooManyFolds, std::to_string(V) + " folds for " + std::to_string(n) + " rows");
  }
  // Deal rows round-robin; for balanced folds deal class 0 first and carry
  // on with class 1 from where class 0 stopped.
  std::vector<Index> order;
  order.reserve(n);
  if (balanced) {
    std::vector<Index> zeros, ones;
    for (std::size_t i = 0; i < n; ++i) (labels[i] == 1 ? ones : zeros).push_back(static_cast<Index>(i));
    rng.shuffle(std::span<Index>(zeros));
    rng.shuffle(std::span<Index>(ones));
    order.insert(order.end(), zeros.begin(), zeros.end());
    order.insert(order.end(), ones.begin(), ones.end());
  } else {
    order.resize(n);
    std::iota(order.begin(), order.end(), Index{0});
    rng.shuffle(std::span<Index>(order));
  }
  // Random relabelling of fold ids, so the short folds are not always last.
  std::vector<int> fold_ids(static_cast<std::size_t>(V));
  std::iota(fold_ids.begin(), fold_ids.end(), 0);
  rng.shuffle(std::span<int>(fold_ids));

  FoldAssignment out;
  out.V = V;
  out.balanced = balanced;
  out.fold_of.assign(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    out.fold_of[static_cast<std::size_t>(order[k])] = fold_ids[k % static_cast<std::size_t>(V)];
  }
  return out;
}

BootstrapPlan make_bootstrap_plan(std::span<const int> labels, int B, RngStream& rng) {
  if (B < 1) throw Error(ErrorCode::InvalidArgument, "need at least one bootstrap draw");
  const auto n = labels.size();
  BootstrapPlan plan;
  plan.samples.reserve(static_cast<std::size_t>(B));
  plan.holdout_of.reserve(static_cast<std::size_t>(B));
  std::vector<char> seen(n);
  for (int b = 0; b < B; ++b) {
    std::vector<Index> sample(n);
    bool single = true;
    for (int attempt = 0; attempt <= kBootstrapRetries && single; ++attempt) {
      bool has0 = false, has1 = false;
      for (auto& s : sample) {
        s = static_cast<Index>(rng.below(n));
        (labels[static_cast<std::size_t>(s)] == 1 ? has1 : has0) = true;
      }
      single = !(has0 && has1);
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (auto s : sample) seen[static_cast<std::size_t>(s)] = 1;
    std::vector<Index> holdout;
    for (std::size_t i = 0; i < n; ++i) {
      if (!seen[i]) holdout.push_back(static_cast<Index>(i));
    }
    plan.samples.push_back(std::move(sample));
    plan.holdout_of.push_back(std::move(holdout));
    plan.single_class.push_back(single);
  }
  return plan;
}

namespace {

// Either a fitted model or the constant prediction of a one-class sample.
struct Predictor {
  std::optional<LinearModel> model;
  int constant = 0;

  int operator()(const FeatureMatrix& X, Index row) const {
    if (!model) return constant;
    return model->weights.dot(X.row(row)) + model->bias >= 0.0 ? 1 : 0;
  }
};

Predictor train(const SampleView& view, const ClassifierSpec& spec, bool& degenerate) {
  bool has0 = false, has1 = false;
  for (Index k = 0; k < view.size(); ++k) (view.label_at(k) == 1 ? has1 : has0) = true;
  if (has0 && has1) {
    degenerate = false;
    return Predictor{fit(view, spec), 0};
  }
  degenerate = true;
  return Predictor{std::nullopt, has1 ? 1 : 0};
}

}  // namespace

AccuracyEstimate resub_accuracy(const LabeledDataset& ds, const ClassifierSpec& spec, RngStream& rng) {
  const LinearModel model = fit(ds, spec, rng);
  Index correct = 0;
  for (Index i = 0; i < ds.n(); ++i) {
    const int yhat = model.weights.dot(ds.features().row(i)) + model.bias >= 0.0 ? 1 : 0;
    correct += (yhat == ds.label(i));
  }
  AccuracyEstimate out;
  out.estimator = EstimatorKind::Resub;
  out.support = ds.n();
  out.value = static_cast<double>(correct) / static_cast<double>(ds.n());
  return out;
}

AccuracyEstimate vfold_accuracy(const LabeledDataset& ds, const ClassifierSpec& spec,
                                const FoldAssignment& folds, RngStream& /*rng*/) {
  if (static_cast<Index>(folds.fold_of.size()) != ds.n()) {
    throw Error(ErrorCode::ShapeMismatch, "fold assignment length differs from n");
  }
  AccuracyEstimate out;
  out.estimator = EstimatorKind::Vfold;
  std::vector<Index> train_rows, test_rows;
  double sum_of_fold_means = 0.0;
  int used_folds = 0;
  for (int v = 0; v < folds.V; ++v) {
    train_rows.clear();
    test_rows.clear();
    for (Index i = 0; i < ds.n(); ++i) {
      (folds.fold_of[static_cast<std::size_t>(i)] == v ? test_rows : train_rows).push_back(i);
    }
    if (test_rows.empty()) continue;
    bool degenerate = false;
    const Predictor h = train(SampleView{&ds.features(), ds.labels(), train_rows}, spec, degenerate);
    out.degenerate_trainings += degenerate;
    Index correct = 0;
    for (Index i : test_rows) correct += (h(ds.features(), i) == ds.label(i));
    sum_of_fold_means += static_cast<double>(correct) / static_cast<double>(test_rows.size());
    out.support += static_cast<Index>(test_rows.size());
    ++used_folds;
  }
  out.value = used_folds ? sum_of_fold_means / used_folds : 0.0;
  return out;
}

AccuracyEstimate bloo_accuracy(const LabeledDataset& ds, const ClassifierSpec& spec,
                               const BootstrapPlan& plan) {
  AccuracyEstimate out;
  out.estimator = EstimatorKind::Bloo;
  double sum = 0.0;
  int used = 0;
  for (std::size_t b = 0; b < plan.samples.size(); ++b) {
    const auto& holdout = plan.holdout_of[b];
    if (holdout.empty()) {
      ++out.empty_holdouts;
      continue;
    }
    bool degenerate = false;
    const Predictor h = train(SampleView{&ds.features(), ds.labels(), plan.samples[b]}, spec, degenerate);
    out.degenerate_trainings += degenerate;
    Index correct = 0;
    for (Index i : holdout) correct += (h(ds.features(), i) == ds.label(i));
    sum += static_cast<double>(correct) / static_cast<double>(holdout.size());
    out.support += static_cast<Index>(holdout.size());
    ++used;
  }
  if (used == 0) throw Error(ErrorCode::AllHoldoutsEmpty, "every bootstrap draw covered all rows");
  out.value = sum / used;
  return out;
}

AccuracyEstimate bloo_accuracy(const LabeledDataset& ds, const ClassifierSpec& spec, int B, RngStream& rng) {
  return bloo_accuracy(ds, spec, make_bootstrap_plan(ds.labels(), B, rng));
}

}  // namespace sigdet
