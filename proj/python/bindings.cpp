#include "sigdet/config.hpp"
#include "sigdet/harness.hpp"
#include "sigdet/report_io.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace sigdet;

namespace {

LabeledDataset dataset(const FeatureMatrix& x, const Labels& y) { return validate_dataset(x, y); }

ClassifierFamily family_of(const std::string& name) {
  for (auto f : {ClassifierFamily::Lda, ClassifierFamily::Dlda, ClassifierFamily::Sdlda, ClassifierFamily::Hdrda,
                 ClassifierFamily::LinearSvm})
    if (to_string(f) == name) return f;
  throw Error(ErrorCode::InvalidArgument, "unknown classifier family '" + name + "'");
}

CovarianceFamily covariance_of(const std::string& name) {
  if (name == "identity") return CovarianceFamily::Identity;
  if (name == "ar1") return CovarianceFamily::Ar1;
  if (name == "brownian") return CovarianceFamily::Brownian;
  if (name == "random_corr") return CovarianceFamily::RandomCorr;
  if (name == "hetero_diag") return CovarianceFamily::HeteroDiag;
  throw Error(ErrorCode::InvalidArgument, "unknown covariance kind '" + name + "'");
}

std::vector<StatisticSpec> resolve(const std::vector<std::string>& names, const std::optional<Matrix>& sigma) {
  std::vector<StatisticSpec> stats;
  for (const auto& n : names) stats.push_back(statistic_by_name(n));
  if (sigma) bind_oracle_sigma(stats, *sigma);
  return stats;
}

py::dict row_dict(const PowerRow& r) {
  py::dict d;
  d["scenario"] = r.scenario;
  d["statistic"] = r.statistic;
  d["effect"] = r.effect;
  d["replications"] = r.replications;
  d["rejections"] = r.rejections;
  d["power"] = r.power;
  d["mc_se"] = r.mc_se;
  d["seed"] = r.seed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sigdet, m) {
  m.doc() = "Two-sample signal detection by permutation testing";

  // Messages start with the error code name, e.g. "ConfigError: ...".
  py::register_exception<Error>(m, "SigdetError", PyExc_RuntimeError);

  m.def("catalog_names", &catalog_names, "Names of every catalog statistic.");
  m.def("basic_battery", &basic_battery);
  m.def("preset_names", &preset_names);
  m.def("preset_yaml", &preset_yaml, py::arg("name"));

  m.def(
      "statistic",
      [](const std::string& name, const FeatureMatrix& x, const Labels& y, std::uint64_t seed,
         std::optional<Matrix> sigma) {
        const auto stats = resolve({name}, sigma);
        RngStream rng = derive_stream(seed, {});
        return evaluate_statistic(stats.front(), dataset(x, y), rng);
      },
      py::arg("name"), py::arg("x"), py::arg("y"), py::arg("seed") = 0, py::arg("sigma") = py::none(),
      "Evaluates a catalog statistic on (x, y).");

  m.def(
      "permutation_test",
      [](const FeatureMatrix& x, const Labels& y, const std::vector<std::string>& names, int r, std::uint64_t seed,
         bool fixed_folds, int threads, std::optional<Matrix> sigma) {
        PermutationOptions opts;
        opts.r = r;
        opts.threads = threads;
        opts.policy = fixed_folds ? RefoldPolicy::FixedFolds : RefoldPolicy::RefoldPerPermutation;
        const auto stats = resolve(names, sigma);
        const auto res = permutation_test(dataset(x, y), stats, opts, derive_stream(seed, {}));
        py::dict out;
        for (std::size_t s = 0; s < names.size(); ++s) {
          const auto& rep = res.reports[s];
          py::dict d;
          d["observed"] = rep.observed;
          d["r"] = rep.r;
          d["greater"] = rep.greater;
          d["equal"] = rep.equal;
          d["p_value"] = rep.p_value_paper();
          d["p_value_add_one"] = rep.p_value_add_one();
          out[py::str(names[s])] = d;
        }
        return out;
      },
      py::arg("x"), py::arg("y"), py::arg("statistics"), py::arg("r") = 300, py::arg("seed") = 0,
      py::arg("fixed_folds") = false, py::arg("threads") = 1, py::arg("sigma") = py::none(),
      "Shared-permutation test of several statistics; one result dict per statistic.");

  m.def(
      "fit",
      [](const FeatureMatrix& x, const Labels& y, const std::string& family, double cost) {
        ClassifierSpec spec{family_of(family)};
        spec.cost = cost;
        const auto ds = dataset(x, y);
        const LinearModel model = fit(view_of(ds), spec);
        return py::make_tuple(model.weights, model.bias);
      },
      py::arg("x"), py::arg("y"), py::arg("family") = "lda", py::arg("cost") = 1.0,
      "Fits a linear classifier; returns (weights, bias). Predict 1 where x @ w + b >= 0.");

  m.def(
      "make_covariance",
      [](const std::string& kind, Index p, double rho, std::uint64_t seed) {
        CovarianceSpec spec;
        spec.kind = covariance_of(kind);
        spec.p = p;
        spec.rho = rho;
        spec.seed = seed;
        return make_covariance(spec);
      },
      py::arg("kind"), py::arg("p"), py::arg("rho") = 0.6, py::arg("seed") = 0);

  m.def(
      "draw",
      [](const std::string& config_or_preset, double effect, std::uint64_t seed) {
        ExperimentConfig exp = resolve_experiment(config_or_preset);
        exp.scenario.set_effect(effect);
        RngStream rng = derive_stream(seed, {});
        const LabeledDataset ds = draw_dataset(exp.scenario, rng);
        return py::make_tuple(FeatureMatrix(ds.features()), Labels(ds.labels().begin(), ds.labels().end()));
      },
      py::arg("config"), py::arg("effect"), py::arg("seed") = 0,
      "One dataset (x, y) from a config file or preset at the given effect.");

  m.def(
      "run",
      [](const std::string& config_or_preset, std::uint64_t seed, std::optional<int> reps, std::optional<int> perms,
         std::optional<std::vector<double>> effects, int threads) {
        ExperimentConfig exp = resolve_experiment(config_or_preset);
        if (reps) exp.scenario.replications = *reps;
        if (perms) exp.scenario.permutations = *perms;
        if (effects) exp.effects = *effects;
        validate_config(exp.scenario);
        PowerReport report;
        {
          py::gil_scoped_release release;
          report = run_grid(exp.scenario, exp.effects, seed, threads);
        }
        py::list rows;
        for (const auto& r : report.rows) rows.append(row_dict(r));
        return rows;
      },
      py::arg("config"), py::arg("seed") = 1, py::arg("reps") = py::none(), py::arg("perms") = py::none(),
      py::arg("effects") = py::none(), py::arg("threads") = 1,
      "Runs a config file or preset; returns the power.csv rows as dicts.");

  m.def(
      "power_csv",
      [](const std::vector<py::dict>& rows) {
        PowerReport report;
        for (const auto& d : rows) {
          PowerRow r;
          r.scenario = d["scenario"].cast<std::string>();
          r.statistic = d["statistic"].cast<std::string>();
          r.effect = d["effect"].cast<double>();
          r.replications = d["replications"].cast<int>();
          r.rejections = d["rejections"].cast<int>();
          r.power = d["power"].cast<double>();
          r.mc_se = d["mc_se"].cast<double>();
          r.seed = d["seed"].cast<std::uint64_t>();
          report.rows.push_back(std::move(r));
        }
        return format_power_csv(report);
      },
      py::arg("rows"), "Formats rows from run() as power.csv text.");
}
