#include "sigdet/simgen.hpp"

#include "helpers.hpp"
#include "sigdet/stats_kernel.hpp"

#include <doctest.h>

#include <numbers>

using namespace sigdet;

namespace {

CovarianceSpec cov(CovarianceFamily kind, Index p, double rho = 0.6) {
  CovarianceSpec s;
  s.kind = kind;
  s.p = p;
  s.rho = rho;
  return s;
}

double mahalanobis_sq(const Vector& mu, const Matrix& sigma) { return mu.dot(sigma.ldlt().solve(mu)); }

void check_psd(const Matrix& S) {
  CHECK(is_symmetric(S));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * eig.eigenvalues().cwiseAbs().maxCoeff());
}

ScenarioConfig base(Index n = 40, Index p = 23) {
  ScenarioConfig cfg;
  cfg.n = n;
  cfg.p = p;
  cfg.covariance.p = p;
  cfg.statistics = {"Hotelling"};
  return cfg;
}

// Student t with 3 degrees of freedom.
double t3_cdf(double t) {
  const double s = std::sqrt(3.0);
  return 0.5 + (t / (s * (1 + t * t / 3)) + std::atan(t / s)) / std::numbers::pi;
}

}  // namespace

TEST_CASE("covariance families") {
  const Matrix ar = make_covariance(cov(CovarianceFamily::Ar1, 23));
  CHECK(ar(0, 2) == doctest::Approx(0.36));
  CHECK(ar(5, 4) == doctest::Approx(0.6));
  CHECK(ar(0, 22) == doctest::Approx(std::pow(0.6, 22)));
  CHECK(make_covariance(cov(CovarianceFamily::Ar1, 7, 0.0)) == Matrix::Identity(7, 7));
  CHECK(make_covariance(cov(CovarianceFamily::Identity, 4)) == Matrix::Identity(4, 4));

  const Matrix br = make_covariance(cov(CovarianceFamily::Brownian, 23));
  CHECK(br(0, 1) == doctest::Approx(1 / std::sqrt(2.0)));
  for (Index k = 0; k < 23; ++k)
    for (Index l = 0; l < 23; ++l)
      CHECK(br(k, l) == doctest::Approx(std::min(k + 1, l + 1) / std::sqrt(double(k + 1) * double(l + 1))));

  const Matrix hd = make_covariance(cov(CovarianceFamily::HeteroDiag, 5));
  CHECK(hd == Vector::LinSpaced(5, 1, 5).asDiagonal().toDenseMatrix());

  CovarianceSpec rc = cov(CovarianceFamily::RandomCorr, 23);
  rc.seed = 11;
  const Matrix r1 = make_covariance(rc);
  CHECK(r1 == make_covariance(rc));
  CHECK((r1.diagonal().array() - 1.0).abs().maxCoeff() < 1e-14);
  rc.seed = 12;
  CHECK(r1 != make_covariance(rc));

  for (auto kind : {CovarianceFamily::Identity, CovarianceFamily::Ar1, CovarianceFamily::Brownian,
                    CovarianceFamily::RandomCorr, CovarianceFamily::HeteroDiag})
    check_psd(make_covariance(cov(kind, 23)));
  for (double rho : {-0.9, 0.0, 0.3, 0.99}) check_psd(make_covariance(cov(CovarianceFamily::Ar1, 23, rho)));
}

TEST_CASE("rho outside (-1, 1) is rejected") {
  for (double rho : {1.0, -1.0, 1.5}) {
    try {
      make_covariance(cov(CovarianceFamily::Ar1, 5, rho));
      FAIL("expected BadRho");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BadRho);
    }
  }
}

TEST_CASE("signal calibration") {
  const Index p = 23;
  SignalSpec s;
  s.strength = 0.5;
  const Vector mu = make_signal(s, Matrix::Identity(p, p));
  CHECK(mu.squaredNorm() == doctest::Approx(5.75));
  CHECK((mu.array() - 0.5).abs().maxCoeff() < 1e-14);

  const Matrix hd = make_covariance(cov(CovarianceFamily::HeteroDiag, p));
  SignalSpec top;
  top.direction = SignalDirection::HighestPc;
  top.strength = 0.25;
  const Vector mt = make_signal(top, hd);
  // Highest axis of diag(1..p) is the last coordinate, a = c sqrt(p * p).
  CHECK(std::abs(mt(p - 1)) == doctest::Approx(0.25 * p));
  CHECK(mt.head(p - 1).norm() < 1e-12);
  CHECK(mt(p - 1) * mt(p - 1) / double(p) == doctest::Approx(0.0625 * p));

  const std::vector<Matrix> sigmas{Matrix::Identity(p, p), make_covariance(cov(CovarianceFamily::Ar1, p)),
                                   make_covariance(cov(CovarianceFamily::Brownian, p)), hd};
  for (const Matrix& sigma : sigmas) {
    for (auto dir : {SignalDirection::ConstantVector, SignalDirection::HighestPc, SignalDirection::LowestPc,
                     SignalDirection::PcIndex}) {
      for (double c : {0.25, 0.5, 1.3}) {
        SignalSpec sp;
        sp.direction = dir;
        sp.pc_index = 4;
        sp.strength = c;
        const Vector m = make_signal(sp, sigma);
        CHECK(testutil::rel_diff(mahalanobis_sq(m, sigma), c * c * p) < 1e-10);
        sp.norm = NormMode::Euclidean;
        CHECK(testutil::rel_diff(make_signal(sp, sigma).squaredNorm(), c * c * p) < 1e-10);
        sp.strength = 0;
        CHECK(make_signal(sp, sigma).isZero(0));
        sp.norm = NormMode::Mahalanobis;
        CHECK(make_signal(sp, sigma).isZero(0));
      }
    }
  }

  // Direction: lowest PC is an eigenvector for the smallest eigenvalue.
  const Matrix ar = sigmas[1];
  SignalSpec low;
  low.direction = SignalDirection::LowestPc;
  low.strength = 1;
  const Vector ml = make_signal(low, ar);
  const double lam_min = Eigen::SelfAdjointEigenSolver<Matrix>(ar).eigenvalues()(0);
  CHECK((ar * ml - lam_min * ml).norm() < 1e-10 * ml.norm());
}

TEST_CASE("singular sigma in Mahalanobis mode") {
  Matrix s = Matrix::Identity(3, 3);
  s(2, 2) = 0;
  SignalSpec sp;
  sp.strength = 1;
  try {
    make_signal(sp, s);
    FAIL("expected SingularSigma");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularSigma);
  }
  sp.norm = NormMode::Euclidean;
  CHECK(make_signal(sp, s).squaredNorm() == doctest::Approx(3.0));
}

TEST_CASE("draws: balance, determinism, shift") {
  ScenarioConfig cfg = base();
  cfg.signal.strength = 0.5;
  const PreparedScenario sc(cfg);
  RngStream a = derive_stream(1, {});
  RngStream b = derive_stream(1, {});
  const auto d1 = sc.draw(a);
  const auto d2 = sc.draw(b);
  CHECK(d1.features() == d2.features());
  CHECK(d1.n0() == 20);
  CHECK(d1.n1() == 20);
  for (Index i = 0; i < 40; ++i) CHECK(d1.label(i) == (i < 20 ? 0 : 1));
  const auto d3 = sc.draw(a);
  CHECK(d3.features() != d1.features());
}

TEST_CASE("mean-difference moment oracle") {
  ScenarioConfig cfg = base();
  cfg.signal.strength = 0.5;
  const PreparedScenario sc(cfg);
  const double expect = 5.75 + 2.0 * 23 / 20.0;
  const int N = 10000;
  double sum = 0, sum2 = 0;
  for (int r = 0; r < N; ++r) {
    RngStream rng = derive_stream(2, {static_cast<std::uint64_t>(r)});
    const auto ds = sc.draw(rng);
    const double v = group_summary(ds).diff.squaredNorm();
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / N;
  const double se = std::sqrt((sum2 / N - mean * mean) / N);
  CHECK(std::abs(mean - expect) < 3 * se);
}

TEST_CASE("within-class covariance matches sigma") {
  ScenarioConfig cfg = base(200, 5);
  cfg.covariance = cov(CovarianceFamily::Ar1, 5);
  cfg.signal.strength = 1;
  const PreparedScenario sc(cfg);
  Matrix acc = Matrix::Zero(5, 5);
  const int N = 400;
  for (int r = 0; r < N; ++r) {
    RngStream rng = derive_stream(3, {static_cast<std::uint64_t>(r)});
    acc += pooled_covariance(sc.draw(rng)).matrix / N;
  }
  CHECK((acc - sc.sigma()).cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("student-t noise has t marginals and is not rescaled") {
  ScenarioConfig cfg = base(100, 4);
  cfg.noise = NoiseKind::StudentT;
  cfg.df = 3;
  const PreparedScenario sc(cfg);
  std::vector<double> xs;
  for (int r = 0; r < 500; ++r) {
    RngStream rng = derive_stream(4, {static_cast<std::uint64_t>(r)});
    const auto ds = sc.draw(rng);
    for (Index i = 0; i < ds.n(); ++i) xs.push_back(ds.features()(i, 0));
  }
  const double N = static_cast<double>(xs.size());
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    const double inside = std::count_if(xs.begin(), xs.end(), [&](double v) { return std::abs(v) < t; }) / N;
    const double expect = 2 * t3_cdf(t) - 1;
    CHECK(std::abs(inside - expect) < 5 * std::sqrt(expect * (1 - expect) / N));
  }
}

TEST_CASE("mixture alternative") {
  ScenarioConfig cfg = base(400, 9);
  cfg.alternative = AlternativeKind::Mixture;
  for (double pi : {0.0, 0.25, 0.5}) {
    cfg.mixture_pi = pi;
    const PreparedScenario sc(cfg);
    CHECK((sc.shift().array() - 1.0).abs().maxCoeff() < 1e-14);  // 3 / sqrt(9)
    Vector m0 = Vector::Zero(9), m1 = Vector::Zero(9);
    const int N = 200;
    for (int r = 0; r < N; ++r) {
      RngStream rng = derive_stream(5, {static_cast<std::uint64_t>(r)});
      const auto g = group_summary(sc.draw(rng));
      m0 += g.mean0 / N;
      m1 += g.mean1 / N;
    }
    // Class means are (1/2 -+ pi) mu; se per coordinate about sqrt(1.25 / 40000).
    CHECK((m0.array() - (0.5 - pi)).abs().maxCoeff() < 0.03);
    CHECK((m1.array() - (0.5 + pi)).abs().maxCoeff() < 0.03);
  }
}

TEST_CASE("config validation names the field") {
  const ScenarioConfig cfg = base();
  validate_config(cfg);
  auto expect_error = [](ScenarioConfig c, const std::string& field) {
    try {
      validate_config(c);
      FAIL("expected ConfigError for " << field);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ConfigError);
      CHECK(std::string(e.what()).find(field) != std::string::npos);
    }
  };
  ScenarioConfig c = cfg;
  c.n = 41;
  expect_error(c, "n");
  c = cfg;
  c.alpha = 1.5;
  expect_error(c, "alpha");
  c = cfg;
  c.permutations = 0;
  expect_error(c, "permutations");
  c = cfg;
  c.alternative = AlternativeKind::Mixture;
  c.mixture_pi = 0.7;
  expect_error(c, "pi");
  c = cfg;
  c.covariance.p = 5;
  expect_error(c, "covariance");
  c = cfg;
  c.folds = 41;
  expect_error(c, "folds");
  c = cfg;
  c.statistics.clear();
  expect_error(c, "statistics");
}
