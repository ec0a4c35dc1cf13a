#include "sigdet/permutation.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>

using namespace sigdet;
using testutil::gaussian_dataset;

namespace {

PermutationReport report(int r, int greater, int equal, double observed = 1.0) {
  PermutationReport rep;
  rep.r = r;
  rep.greater = greater;
  rep.equal = equal;
  rep.observed = observed;
  return rep;
}

LabeledDataset constant_dataset() {
  FeatureMatrix x = FeatureMatrix::Constant(12, 2, 1.0);
  Labels y{0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1};
  return LabeledDataset(x, y);
}

}  // namespace

TEST_CASE("canonical rounding keeps 12 significant digits") {
  CHECK(canonical_round(0.1 + 0.2) == canonical_round(0.3));
  CHECK(canonical_round(1.0 / 3.0) == 3.33333333333e-1);
  CHECK(canonical_round(0.75) == 0.75);
  CHECK(canonical_round(0.0) == 0.0);
  CHECK(canonical_round(-0.0) == 0.0);
  CHECK(canonical_round(1.0 + 1e-13) == 1.0);
  CHECK(canonical_round(1.0 + 1e-10) != 1.0);
}

TEST_CASE("constant statistic: every permutation ties, p = 1") {
  const auto ds = constant_dataset();
  const auto stat = statistic_by_name("lda.noCV.1");
  const auto rep = permutation_test(ds, stat, 50, RefoldPolicy::RefoldPerPermutation, derive_stream(1, {}));
  CHECK(rep.observed == doctest::Approx(7.0 / 12));
  CHECK(rep.equal == 50);
  CHECK(rep.greater == 0);
  CHECK(rep.p_value_paper() == 1.0);
  CHECK(rep.p_value_add_one() == 1.0);
}

TEST_CASE("dominant statistic: p = 0, or 1/(r+1) with add-one") {
  const auto ds = gaussian_dataset(20, 3, 2, 8.0);
  const auto rep = permutation_test(ds, statistic_by_name("Hotelling"), 99, RefoldPolicy::RefoldPerPermutation,
                                    derive_stream(2, {}));
  CHECK(rep.greater + rep.equal == 0);
  CHECK(p_value(rep, PValueMode::PaperExact) == 0.0);
  CHECK(p_value(rep, PValueMode::AddOne) == doctest::Approx(1.0 / 100));
}

TEST_CASE("decision rule") {
  const double alpha = 0.05;
  // p = 6/300 = 0.02
  CHECK(decide(report(300, 5, 1), alpha, false, 0.99).rejected);
  CHECK_FALSE(decide(report(300, 5, 1), alpha, false, 0.99).tie_randomization_used);
  // p exactly alpha rejects.
  CHECK(decide(report(100, 3, 2), alpha, false, 0.99).rejected);
  // All tied: reject with probability alpha.
  CHECK(rejection_probability(report(300, 0, 300), alpha, true) == doctest::Approx(alpha));
  CHECK(decide(report(300, 0, 300), alpha, true, 0.049).rejected);
  CHECK_FALSE(decide(report(300, 0, 300), alpha, true, 0.051).rejected);
  CHECK(decide(report(300, 0, 300), alpha, true, 0.049).tie_randomization_used);
  CHECK_FALSE(decide(report(300, 0, 300), alpha, false, 0.0).rejected);
  // 0.2 greater, 0.1 tied: p = 0.3, no room left.
  CHECK(rejection_probability(report(10, 2, 1), alpha, true) == 0.0);
  CHECK_FALSE(decide(report(10, 2, 1), alpha, true, 0.0).rejected);
  // None greater, 4/10 tied: (0.05 - 0) / 0.4 = 0.125.
  CHECK(rejection_probability(report(10, 0, 4), alpha, true) == doctest::Approx(0.125));
  // 0.01 greater, 0.08 tied: 0.5.
  CHECK(rejection_probability(report(100, 1, 8), alpha, true) == doctest::Approx(0.5));
  // Add-one: observed joins the ties, (0.05 - 1/101) / (9/101).
  CHECK(rejection_probability(report(100, 1, 8), alpha, true, PValueMode::AddOne) ==
        doctest::Approx((0.05 - 1.0 / 101) / (9.0 / 101)));
  CHECK_THROWS_AS(decide(report(10, 0, 0), 0.0, false, 0.5), Error);
  CHECK_THROWS_AS(decide(report(10, 0, 0), 1.0, false, 0.5), Error);
}

TEST_CASE("randomized decision has exact size alpha when all tied") {
  RngStream u = derive_stream(3, {});
  const auto rep = report(300, 0, 300);
  int rejections = 0;
  const int N = 100000;
  for (int i = 0; i < N; ++i) rejections += decide(rep, 0.05, true, u.uniform()).rejected;
  CHECK(std::abs(rejections / double(N) - 0.05) < 4 * std::sqrt(0.05 * 0.95 / N));
}

TEST_CASE("stream layout: refold per permutation") {
  const auto ds = gaussian_dataset(16, 3, 4, 0.3);
  const auto stat = statistic_by_name("lda.CV.1");
  const RngStream root = derive_stream(4, {9});
  PermutationOptions opts;
  opts.r = 30;
  opts.keep_null_values = true;
  const auto res = permutation_test(ds, std::span<const StatisticSpec>(&stat, 1), opts, root);
  RngStream r0 = root.child({2, 0, 0});
  CHECK(res.reports[0].observed == evaluate_statistic(stat, ds, r0));
  for (std::uint64_t j = 1; j <= 30; ++j) {
    Labels y(ds.labels().begin(), ds.labels().end());
    RngStream perm = root.child({1, j});
    perm.shuffle(std::span<int>(y));
    RngStream rs = root.child({2, j, 0});
    CHECK(res.null_values[0][j - 1] == evaluate_statistic(stat, ds.with_labels(y), rs));
  }
}

TEST_CASE("stream layout: fixed folds reuse the observed folds") {
  const auto ds = gaussian_dataset(16, 3, 5, 0.3);
  const auto stat = statistic_by_name("lda.CV.1");
  const auto& acc = std::get<AccuracyStatSpec>(stat.kind);
  const RngStream root = derive_stream(5, {9});
  PermutationOptions opts;
  opts.r = 30;
  opts.policy = RefoldPolicy::FixedFolds;
  opts.keep_null_values = true;
  const auto res = permutation_test(ds, std::span<const StatisticSpec>(&stat, 1), opts, root);
  RngStream r0 = root.child({2, 0, 0});
  const FoldAssignment folds = make_folds(ds, acc.folds, acc.balanced, r0);
  RngStream dummy = root.child({2, 0, 1});
  CHECK(res.reports[0].observed == vfold_accuracy(ds, acc.classifier, folds, dummy).value);
  for (std::uint64_t j = 1; j <= 30; ++j) {
    Labels y(ds.labels().begin(), ds.labels().end());
    RngStream perm = root.child({1, j});
    perm.shuffle(std::span<int>(y));
    CHECK(res.null_values[0][j - 1] == vfold_accuracy(ds.with_labels(y), acc.classifier, folds, dummy).value);
  }
}

TEST_CASE("counts agree with the null values and survive monotone transforms") {
  const auto ds = gaussian_dataset(20, 4, 6, 0.4);
  std::vector<StatisticSpec> stats{statistic_by_name("Hotelling"), statistic_by_name("Goeman"),
                                   statistic_by_name("svm.CV.1")};
  PermutationOptions opts;
  opts.r = 60;
  opts.keep_null_values = true;
  const auto res = permutation_test(ds, stats, opts, derive_stream(6, {}));
  auto count = [](double t, const std::vector<double>& null, auto f) {
    int ge = 0;
    for (double v : null) ge += canonical_round(f(v)) >= canonical_round(f(t));
    return ge;
  };
  for (std::size_t s = 0; s < stats.size(); ++s) {
    const auto& rep = res.reports[s];
    const auto& null = res.null_values[s];
    const int ge = count(rep.observed, null, [](double v) { return v; });
    CHECK(ge == rep.greater + rep.equal);
    CHECK(count(rep.observed, null, [](double v) { return 2 * v + 1; }) == ge);
    CHECK(count(rep.observed, null, [](double v) { return v * v * v; }) == ge);
  }
}

TEST_CASE("shared permutations: every statistic sees the same labellings") {
  const auto ds = gaussian_dataset(16, 3, 7, 0.2);
  std::vector<StatisticSpec> stats{statistic_by_name("Hotelling"), statistic_by_name("Hotelling")};
  PermutationOptions opts;
  opts.r = 40;
  opts.keep_null_values = true;
  const auto res = permutation_test(ds, stats, opts, derive_stream(7, {}));
  CHECK(res.null_values[0] == res.null_values[1]);
}

TEST_CASE("results do not depend on the thread count") {
  const auto ds = gaussian_dataset(20, 5, 8, 0.2);
  std::vector<StatisticSpec> stats{statistic_by_name("Hotelling.shrink"), statistic_by_name("svm.CV.2"),
                                   statistic_by_name("LDA.Boot.1")};
  PermutationOptions opts;
  opts.r = 40;
  opts.keep_null_values = true;
  const auto one = permutation_test(ds, stats, opts, derive_stream(8, {}));
  for (int t : {2, 3, 8}) {
    opts.threads = t;
    const auto many = permutation_test(ds, stats, opts, derive_stream(8, {}));
    CHECK(many.null_values == one.null_values);
    for (std::size_t s = 0; s < stats.size(); ++s) {
      CHECK(many.reports[s].greater == one.reports[s].greater);
      CHECK(many.reports[s].equal == one.reports[s].equal);
    }
  }
}

TEST_CASE("null p-values are close to uniform") {
  const int reps = 2000;
  const int r = 300;
  std::vector<double> p;
  for (int rep = 0; rep < reps; ++rep) {
    const auto ds = gaussian_dataset(20, 4, 1000 + static_cast<std::uint64_t>(rep));
    const auto out = permutation_test(ds, statistic_by_name("Goeman"), r, RefoldPolicy::RefoldPerPermutation,
                                      derive_stream(9, {static_cast<std::uint64_t>(rep)}));
    p.push_back(out.p_value_paper());
  }
  std::sort(p.begin(), p.end());
  double d = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    d = std::max(d, std::abs(static_cast<double>(i + 1) / reps - p[i]));
    d = std::max(d, std::abs(static_cast<double>(i) / reps - p[i]));
  }
  CHECK(d < 0.035);
}

TEST_CASE("r must be positive") {
  const auto ds = gaussian_dataset(8, 2, 10);
  CHECK_THROWS_AS(permutation_test(ds, statistic_by_name("Goeman"), 0, RefoldPolicy::RefoldPerPermutation,
                                   derive_stream(10, {})),
                  Error);
}
