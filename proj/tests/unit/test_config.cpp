#include "sigdet/config.hpp"

#include "sigdet/statistic.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace sigdet;

namespace {

std::string config_error(const std::string& yaml) {
  try {
    parse_experiment(yaml, "t.yaml");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    return e.what();
  }
  FAIL("expected ConfigError");
  return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("minimal config takes defaults") {
  const auto exp = parse_experiment("statistics: [Hotelling, sd]\n");
  const auto& c = exp.scenario;
  CHECK(c.n == 40);
  CHECK(c.p == 23);
  CHECK(c.covariance.p == 23);
  CHECK(c.permutations == 300);
  CHECK(c.alpha == 0.05);
  CHECK_FALSE(c.tie_break);
  CHECK_FALSE(c.add_one_pvalue);
  CHECK(exp.effects == std::vector<double>{0.0});
  CHECK(c.statistics == std::vector<std::string>{"Hotelling", "sd"});
}

TEST_CASE("full config") {
  const auto exp = parse_experiment(R"(name: custom
n: 30
p: 6
noise: {kind: student_t, df: 5}
covariance: {kind: ar1, rho: 0.3}
signal: {direction: pc, index: 2, norm: euclidean}
effects: [0, 0.125, 1]
replications: 12
permutations: 99
alpha: 0.1
folds: {count: 5, balanced: false, refold: false}
tie_break: true
pvalue_mode: add-one
hdrda_mix: 0.25
statistics: [basic, SVM.Boot.3]
)");
  const auto& c = exp.scenario;
  CHECK(c.name == "custom");
  CHECK(c.n == 30);
  CHECK(c.p == 6);
  CHECK(c.covariance.p == 6);
  CHECK(c.noise == NoiseKind::StudentT);
  CHECK(c.df == 5);
  CHECK(c.covariance.kind == CovarianceFamily::Ar1);
  CHECK(c.covariance.rho == 0.3);
  CHECK(c.signal.direction == SignalDirection::PcIndex);
  CHECK(c.signal.pc_index == 2);
  CHECK(c.signal.norm == NormMode::Euclidean);
  CHECK(exp.effects == std::vector<double>{0, 0.125, 1});
  CHECK(c.effect() == 0.0);
  CHECK(c.replications == 12);
  CHECK(c.permutations == 99);
  CHECK(c.alpha == 0.1);
  CHECK(c.folds == 5);
  CHECK_FALSE(c.balanced_folds);
  CHECK_FALSE(c.refold);
  CHECK(c.tie_break);
  CHECK(c.add_one_pvalue);
  CHECK(c.hdrda_mix == 0.25);
  REQUIRE(c.statistics.size() == basic_battery().size() + 1);
  CHECK(c.statistics.back() == "SVM.Boot.3");
}

TEST_CASE("errors name the line and field") {
  std::string e = config_error("n: 40\np: 23\nbogus: 1\nstatistics: basic\n");
  CHECK(contains(e, "t.yaml:3"));
  CHECK(contains(e, "bogus"));

  e = config_error("n: 40\nreplications: many\nstatistics: basic\n");
  CHECK(contains(e, "t.yaml:2"));
  CHECK(contains(e, "replications"));

  e = config_error("statistics: basic\ncovariance: {kind: toeplitz}\n");
  CHECK(contains(e, "t.yaml:2"));
  CHECK(contains(e, "covariance.kind"));
  CHECK(contains(e, "ar1"));

  e = config_error("statistics: [Hotelling, lda.CV.9]\n");
  CHECK(contains(e, "t.yaml:1"));
  CHECK(contains(e, "lda.CV.9"));

  e = config_error("n: 40\n");
  CHECK(contains(e, "statistics"));

  e = config_error("n: 41\nstatistics: basic\n");
  CHECK(contains(e, "n"));

  e = config_error("alpha: 2\nstatistics: basic\n");
  CHECK(contains(e, "alpha"));

  e = config_error("alternative: mixture\neffects: [0, 0.75]\nstatistics: basic\n");
  CHECK(contains(e, "effects"));

  e = config_error("effects: [0, -1]\nstatistics: basic\n");
  CHECK(contains(e, "effects"));

  e = config_error("pvalue_mode: exact\nstatistics: basic\n");
  CHECK(contains(e, "pvalue_mode"));

  e = config_error("n: 40\n  p: [\n");
  CHECK(contains(e, "t.yaml:"));

  e = config_error("- 1\n- 2\n");
  CHECK(contains(e, "mapping"));
}

TEST_CASE("presets parse and validate") {
  const auto& names = preset_names();
  CHECK(names.front() == "fig1a");
  CHECK(names.back() == "fig11");
  CHECK(std::find(names.begin(), names.end(), "fig10b") != names.end());
  for (const auto& name : names) {
    CAPTURE(name);
    const auto exp = resolve_experiment(name);
    CHECK(exp.scenario.name == name);
    CHECK(exp.scenario.n == 40);
    CHECK(exp.scenario.p == 23);
    CHECK(exp.effects == std::vector<double>{0, 0.25, 0.5});
    validate_config(exp.scenario);
  }
  CHECK_FALSE(resolve_experiment("fig1a").scenario.balanced_folds);
  CHECK(resolve_experiment("fig1b").scenario.balanced_folds);
  CHECK(resolve_experiment("fig3").scenario.tie_break);
  CHECK(resolve_experiment("fig4").scenario.noise == NoiseKind::StudentT);
  CHECK(resolve_experiment("fig11").scenario.alternative == AlternativeKind::Mixture);
  CHECK(resolve_experiment("fig10a").scenario.statistics.size() == 16);
  CHECK(resolve_experiment("fig10b").scenario.statistics.size() == 17);
}

TEST_CASE("unknown preset lists the valid ones") {
  try {
    resolve_experiment("fig99");
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    const std::string msg = e.what();
    CHECK(contains(msg, "fig99"));
    for (const auto& n : preset_names()) CHECK(contains(msg, n));
  }
}

TEST_CASE("canonical yaml round-trips") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto exp = resolve_experiment(name);
    const std::string y = to_yaml(exp);
    const auto back = parse_experiment(y);
    CHECK(to_yaml(back) == y);
    CHECK(back.effects == exp.effects);
    CHECK(back.scenario.statistics == exp.scenario.statistics);
    CHECK(back.scenario.covariance.kind == exp.scenario.covariance.kind);
    CHECK(back.scenario.signal.direction == exp.scenario.signal.direction);
    CHECK(back.scenario.signal.pc_index == exp.scenario.signal.pc_index);
    CHECK(back.scenario.balanced_folds == exp.scenario.balanced_folds);
  }
  ExperimentConfig odd = resolve_experiment("fig1b");
  odd.effects = {0.1, 1.0 / 3, 0.7};
  odd.scenario.alpha = 0.01;
  odd.scenario.hdrda_mix = 0.123456789;
  const auto back = parse_experiment(to_yaml(odd));
  CHECK(back.effects == odd.effects);
  CHECK(back.scenario.alpha == 0.01);
  CHECK(back.scenario.hdrda_mix == 0.123456789);
}

TEST_CASE("files resolve before presets") {
  const auto dir = std::filesystem::temp_directory_path() / "sigdet_config_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "exp.yaml").string();
  std::ofstream(path) << "name: from_file\nreplications: 3\nstatistics: [Goeman]\n";
  std::string text;
  const auto exp = resolve_experiment(path, &text);
  CHECK(exp.scenario.name == "from_file");
  CHECK(contains(text, "from_file"));
  try {
    load_experiment_file((dir / "missing.yaml").string());
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }
  std::ofstream(path) << "name: x\nn: 40\nstatistics: [Goeman]\nfolds: {count: 50}\n";
  try {
    load_experiment_file(path);
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(contains(e.what(), path));
    CHECK(contains(e.what(), "folds"));
  }
  std::filesystem::remove_all(dir);
}
