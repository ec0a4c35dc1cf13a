#include "sigdet/config.hpp"

#include "sigdet/statistic.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sigdet {

namespace {

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& why) const {
    std::string where = source_;
    if (node.IsDefined() && node.Mark().line >= 0) where += ":" + std::to_string(node.Mark().line + 1);
    throw Error(ErrorCode::ConfigError, where + ": field '" + field + "': " + why);
  }

  void allow_keys(const YAML::Node& map, const std::string& field, std::set<std::string> keys) const {
    if (!map.IsMap()) fail(map, field, "expected a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!keys.count(key)) fail(kv.first, field.empty() ? key : field + "." + key, "unknown key");
    }
  }

  template <typename T>
  T get(const YAML::Node& node, const std::string& field) const {
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, field, "wrong type");
    }
  }

  template <typename T>
  void read(const YAML::Node& map, const char* key, const std::string& field, T& out) const {
    if (const YAML::Node v = map[key]) out = get<T>(v, field);
  }

  std::string choice(const YAML::Node& node, const std::string& field,
                     std::initializer_list<const char*> options) const {
    const auto value = get<std::string>(node, field);
    for (const char* o : options)
      if (value == o) return value;
    std::string list;
    for (const char* o : options) list += std::string(list.empty() ? "" : ", ") + o;
    fail(node, field, "'" + value + "' is not one of " + list);
  }

 private:
  std::string source_;
};

const std::map<std::string, CovarianceFamily> kCovariance = {
    {"identity", CovarianceFamily::Identity},     {"ar1", CovarianceFamily::Ar1},
    {"brownian", CovarianceFamily::Brownian},     {"random_corr", CovarianceFamily::RandomCorr},
    {"hetero_diag", CovarianceFamily::HeteroDiag}};

const std::map<std::string, SignalDirection> kDirection = {{"constant", SignalDirection::ConstantVector},
                                                           {"highest_pc", SignalDirection::HighestPc},
                                                           {"lowest_pc", SignalDirection::LowestPc},
                                                           {"pc", SignalDirection::PcIndex}};

template <typename E>
std::string name_of(const std::map<std::string, E>& table, E value) {
  for (const auto& [k, v] : table)
    if (v == value) return k;
  return "?";
}

}  // namespace

ExperimentConfig parse_experiment(const std::string& yaml_text, const std::string& source) {
  Parser P(source);
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorCode::ConfigError, source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  P.allow_keys(root, "",
               {"name", "n", "p", "noise", "covariance", "alternative", "signal", "mixture", "effects",
                "replications", "permutations", "alpha", "folds", "tie_break", "pvalue_mode", "hdrda_mix",
                "statistics"});

  ExperimentConfig out;
  ScenarioConfig& c = out.scenario;
  P.read(root, "name", "name", c.name);
  P.read(root, "n", "n", c.n);
  P.read(root, "p", "p", c.p);
  c.covariance.p = c.p;

  if (const YAML::Node noise = root["noise"]) {
    P.allow_keys(noise, "noise", {"kind", "df"});
    if (noise["kind"]) {
      c.noise = P.choice(noise["kind"], "noise.kind", {"gaussian", "student_t"}) == "gaussian"
                    ? NoiseKind::Gaussian
                    : NoiseKind::StudentT;
    }
    P.read(noise, "df", "noise.df", c.df);
  }

  if (const YAML::Node cov = root["covariance"]) {
    P.allow_keys(cov, "covariance", {"kind", "rho", "seed"});
    if (cov["kind"]) {
      c.covariance.kind = kCovariance.at(
          P.choice(cov["kind"], "covariance.kind", {"identity", "ar1", "brownian", "random_corr", "hetero_diag"}));
    }
    P.read(cov, "rho", "covariance.rho", c.covariance.rho);
    P.read(cov, "seed", "covariance.seed", c.covariance.seed);
  }

  if (const YAML::Node alt = root["alternative"]) {
    c.alternative = P.choice(alt, "alternative", {"shift", "mixture"}) == "shift" ? AlternativeKind::Shift
                                                                                  : AlternativeKind::Mixture;
  }
  if (const YAML::Node sig = root["signal"]) {
    P.allow_keys(sig, "signal", {"direction", "index", "norm"});
    if (sig["direction"]) {
      c.signal.direction =
          kDirection.at(P.choice(sig["direction"], "signal.direction", {"constant", "highest_pc", "lowest_pc", "pc"}));
    }
    P.read(sig, "index", "signal.index", c.signal.pc_index);
    if (sig["norm"]) {
      c.signal.norm = P.choice(sig["norm"], "signal.norm", {"mahalanobis", "euclidean"}) == "mahalanobis"
                          ? NormMode::Mahalanobis
                          : NormMode::Euclidean;
    }
  }
  if (const YAML::Node mix = root["mixture"]) {
    P.allow_keys(mix, "mixture", {"amplitude"});
    P.read(mix, "amplitude", "mixture.amplitude", c.mixture_amplitude);
  }

  if (const YAML::Node eff = root["effects"]) {
    if (!eff.IsSequence() || eff.size() == 0) P.fail(eff, "effects", "expected a non-empty list");
    for (const auto& e : eff) out.effects.push_back(P.get<double>(e, "effects"));
  } else {
    out.effects = {0.0};
  }
  for (double e : out.effects) {
    if (e < 0.0) P.fail(root["effects"], "effects", "values must be non-negative");
    if (c.alternative == AlternativeKind::Mixture && e > 0.5) {
      P.fail(root["effects"], "effects", "mixture weights must lie in [0, 1/2]");
    }
  }

  P.read(root, "replications", "replications", c.replications);
  P.read(root, "permutations", "permutations", c.permutations);
  P.read(root, "alpha", "alpha", c.alpha);
  if (const YAML::Node folds = root["folds"]) {
    P.allow_keys(folds, "folds", {"count", "balanced", "refold"});
    P.read(folds, "count", "folds.count", c.folds);
    P.read(folds, "balanced", "folds.balanced", c.balanced_folds);
    P.read(folds, "refold", "folds.refold", c.refold);
  }
  P.read(root, "tie_break", "tie_break", c.tie_break);
  if (const YAML::Node mode = root["pvalue_mode"]) {
    c.add_one_pvalue = P.choice(mode, "pvalue_mode", {"paper", "add-one"}) == "add-one";
  }
  P.read(root, "hdrda_mix", "hdrda_mix", c.hdrda_mix);

  const YAML::Node stats = root["statistics"];
  if (!stats) P.fail(root, "statistics", "missing");
  if (stats.IsScalar() && stats.as<std::string>() == "basic") {
    c.statistics = basic_battery();
  } else if (stats.IsSequence()) {
    const auto& known = catalog_names();
    for (const auto& s : stats) {
      const auto name = P.get<std::string>(s, "statistics");
      if (name == "basic") {
        c.statistics.insert(c.statistics.end(), basic_battery().begin(), basic_battery().end());
        continue;
      }
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        P.fail(s, "statistics", "unknown statistic '" + name + "'");
      }
      c.statistics.push_back(name);
    }
  } else {
    P.fail(stats, "statistics", "expected a list of names or 'basic'");
  }

  c.set_effect(out.effects.front());
  try {
    validate_config(c);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, source + ": " + e.what());
  }
  return out;
}

ExperimentConfig load_experiment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment(buf.str(), path);
}

std::string to_yaml(const ExperimentConfig& config) {
  const ScenarioConfig& c = config.scenario;
  YAML::Emitter y;
  y << YAML::BeginMap;
  y << YAML::Key << "name" << YAML::Value << c.name;
  y << YAML::Key << "n" << YAML::Value << c.n;
  y << YAML::Key << "p" << YAML::Value << c.p;
  y << YAML::Key << "noise" << YAML::Value << YAML::Flow << YAML::BeginMap;
  y << YAML::Key << "kind" << YAML::Value << (c.noise == NoiseKind::Gaussian ? "gaussian" : "student_t");
  if (c.noise == NoiseKind::StudentT) y << YAML::Key << "df" << YAML::Value << c.df;
  y << YAML::EndMap;
  y << YAML::Key << "covariance" << YAML::Value << YAML::Flow << YAML::BeginMap;
  y << YAML::Key << "kind" << YAML::Value << name_of(kCovariance, c.covariance.kind);
  if (c.covariance.kind == CovarianceFamily::Ar1) y << YAML::Key << "rho" << YAML::Value << c.covariance.rho;
  if (c.covariance.kind == CovarianceFamily::RandomCorr) {
    y << YAML::Key << "seed" << YAML::Value << c.covariance.seed;
  }
  y << YAML::EndMap;
  y << YAML::Key << "alternative" << YAML::Value
    << (c.alternative == AlternativeKind::Shift ? "shift" : "mixture");
  if (c.alternative == AlternativeKind::Shift) {
    y << YAML::Key << "signal" << YAML::Value << YAML::Flow << YAML::BeginMap;
    y << YAML::Key << "direction" << YAML::Value << name_of(kDirection, c.signal.direction);
    if (c.signal.direction == SignalDirection::PcIndex) {
      y << YAML::Key << "index" << YAML::Value << c.signal.pc_index;
    }
    y << YAML::Key << "norm" << YAML::Value
      << (c.signal.norm == NormMode::Mahalanobis ? "mahalanobis" : "euclidean");
    y << YAML::EndMap;
  } else {
    y << YAML::Key << "mixture" << YAML::Value << YAML::Flow << YAML::BeginMap;
    y << YAML::Key << "amplitude" << YAML::Value << c.mixture_amplitude << YAML::EndMap;
  }
  y << YAML::Key << "effects" << YAML::Value << YAML::Flow << config.effects;
  y << YAML::Key << "replications" << YAML::Value << c.replications;
  y << YAML::Key << "permutations" << YAML::Value << c.permutations;
  y << YAML::Key << "alpha" << YAML::Value << c.alpha;
  y << YAML::Key << "folds" << YAML::Value << YAML::Flow << YAML::BeginMap;
  y << YAML::Key << "count" << YAML::Value << c.folds;
  y << YAML::Key << "balanced" << YAML::Value << c.balanced_folds;
  y << YAML::Key << "refold" << YAML::Value << c.refold << YAML::EndMap;
  y << YAML::Key << "tie_break" << YAML::Value << c.tie_break;
  y << YAML::Key << "pvalue_mode" << YAML::Value << (c.add_one_pvalue ? "add-one" : "paper");
  y << YAML::Key << "hdrda_mix" << YAML::Value << c.hdrda_mix;
  y << YAML::Key << "statistics" << YAML::Value << YAML::Flow << c.statistics;
  y << YAML::EndMap;
  return std::string(y.c_str()) + "\n";
}

namespace {

const std::string kBasicHeader = R"(n: 40
p: 23
effects: [0, 0.25, 0.5]
replications: 1000
permutations: 300
alpha: 0.05
folds: {count: 4, balanced: true, refold: true}
pvalue_mode: paper
)";

std::string shift_preset(const std::string& name, const std::string& body, const std::string& statistics) {
  return "name: " + name + "\n" + kBasicHeader + body + "statistics: " + statistics + "\n";
}

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> table = [] {
    const std::string basic = "[basic]";
    const std::string ident = "covariance: {kind: identity}\nsignal: {direction: constant, norm: mahalanobis}\n";
    auto ar1 = [](const char* dir) {
      return std::string("covariance: {kind: ar1, rho: 0.6}\nsignal: {direction: ") + dir +
             ", norm: mahalanobis}\n";
    };
    auto cov = [](const char* kind, const char* dir) {
      return std::string("covariance: {kind: ") + kind + "}\nsignal: {direction: " + dir + ", norm: mahalanobis}\n";
    };
    std::map<std::string, std::string> t;
    t["fig1a"] = shift_preset("fig1a", ident, basic);
    // Unbalanced folding.
    {
      std::string& s = t["fig1a"];
      s.replace(s.find("balanced: true"), 14, "balanced: false");
    }
    t["fig1b"] = shift_preset("fig1b", ident, basic);
    t["fig3"] = shift_preset("fig3", ident + "tie_break: true\n", basic);
    t["fig4"] = shift_preset("fig4", ident + "noise: {kind: student_t, df: 3}\n", basic);
    t["fig5a"] = shift_preset("fig5a", ar1("highest_pc"), basic);
    t["fig5b"] = shift_preset("fig5b", ar1("lowest_pc"), basic);
    t["fig6a"] = shift_preset("fig6a", cov("brownian", "highest_pc"), basic);
    t["fig6b"] = shift_preset("fig6b", cov("brownian", "lowest_pc"), basic);
    t["fig7a"] = shift_preset("fig7a",
                              "covariance: {kind: random_corr, seed: 1}\n"
                              "signal: {direction: highest_pc, norm: mahalanobis}\n",
                              basic);
    t["fig7b"] = shift_preset("fig7b",
                              "covariance: {kind: random_corr, seed: 1}\n"
                              "signal: {direction: lowest_pc, norm: mahalanobis}\n",
                              basic);
    t["fig8a"] = shift_preset("fig8a", cov("hetero_diag", "highest_pc"), basic);
    t["fig8b"] = shift_preset("fig8b", cov("hetero_diag", "lowest_pc"), basic);
    t["fig9a"] = shift_preset("fig9a",
                              "covariance: {kind: ar1, rho: 0.6}\nsignal: {direction: pc, index: 7, norm: euclidean}\n",
                              basic);
    t["fig9b"] = shift_preset("fig9b",
                              "covariance: {kind: ar1, rho: 0.6}\nsignal: {direction: pc, index: 15, norm: euclidean}\n",
                              basic);
    t["fig10a"] = shift_preset("fig10a", ident,
                               "[basic, LDA.Boot.1, SVM.Boot.1, SVM.Boot.2, SVM.Boot.3, SVM.Boot.4]");
    t["fig10b"] = shift_preset(
        "fig10b", ident,
        "[basic, svm.CV.5, svm.CV.6, lda.highdim.1, lda.highdim.2, lda.highdim.3, lda.highdim.4]");
    t["fig11"] = shift_preset("fig11", "covariance: {kind: identity}\nalternative: mixture\nmixture: {amplitude: 3}\n",
                              basic);
    return t;
  }();
  return table;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : presets()) v.push_back(k);
    std::sort(v.begin(), v.end(), [](const std::string& a, const std::string& b) {
      // fig1a < fig3 < fig10a: compare the figure number numerically.
      auto num = [](const std::string& s) { return std::stoi(s.substr(3)); };
      return num(a) != num(b) ? num(a) < num(b) : a < b;
    });
    return v;
  }();
  return names;
}

const std::string& preset_yaml(const std::string& name) {
  const auto& t = presets();
  const auto it = t.find(name);
  if (it == t.end()) {
    std::string list;
    for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
    throw Error(ErrorCode::ConfigError, "unknown preset '" + name + "'; valid presets: " + list);
  }
  return it->second;
}

ExperimentConfig resolve_experiment(const std::string& config_or_preset, std::string* yaml_text) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(config_or_preset, ec)) {
    std::ifstream in(config_or_preset);
    std::stringstream buf;
    buf << in.rdbuf();
    if (yaml_text) *yaml_text = buf.str();
    return parse_experiment(buf.str(), config_or_preset);
  }
  const std::string& text = preset_yaml(config_or_preset);
  if (yaml_text) *yaml_text = text;
  return parse_experiment(text, "preset:" + config_or_preset);
}

}  // namespace sigdet
