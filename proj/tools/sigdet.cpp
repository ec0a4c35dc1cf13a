// sigdet command-line front end.
#include "selftest.hpp"
#include "sigdet/config.hpp"
#include "sigdet/harness.hpp"
#include "sigdet/report_io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

namespace fs = std::filesystem;
using namespace sigdet;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct RunOptions {
  std::string target;
  std::uint64_t seed = 1;
  std::optional<int> reps;
  std::optional<int> perms;
  std::optional<double> alpha;
  std::optional<std::string> pvalue_mode;
  std::optional<std::string> tie_break;
  int threads = 0;
  std::string out = "out";
  bool plots = true;
};

int resolved_threads(int requested) {
  if (requested > 0) return requested;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string plot_name(const std::string& scenario) { return scenario + ".svg"; }

// Groups rows by scenario, keeping first-seen order.
std::vector<std::pair<std::string, std::vector<PowerRow>>> by_scenario(const std::vector<PowerRow>& rows) {
  std::vector<std::pair<std::string, std::vector<PowerRow>>> groups;
  for (const auto& r : rows) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == r.scenario; });
    if (it == groups.end()) {
      groups.push_back({r.scenario, {}});
      it = groups.end() - 1;
    }
    it->second.push_back(r);
  }
  return groups;
}

int cmd_run(const RunOptions& o) {
  std::string yaml;
  ExperimentConfig exp = resolve_experiment(o.target, &yaml);
  ScenarioConfig& cfg = exp.scenario;
  if (o.reps) cfg.replications = *o.reps;
  if (o.perms) cfg.permutations = *o.perms;
  if (o.alpha) cfg.alpha = *o.alpha;
  if (o.pvalue_mode) cfg.add_one_pvalue = (*o.pvalue_mode == "add-one");
  if (o.tie_break) cfg.tie_break = (*o.tie_break == "on");
  validate_config(cfg);
  const std::string resolved_yaml = to_yaml(exp);
  const int threads = resolved_threads(o.threads);

  std::cerr << "sigdet: " << cfg.name << ", " << cfg.statistics.size() << " statistics, " << exp.effects.size()
            << " effects, " << cfg.replications << " replications x " << cfg.permutations << " permutations, "
            << threads << " thread(s)\n";
  PowerReport report;
  for (double effect : exp.effects) {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig at = cfg;
    at.set_effect(effect);
    PowerReport part = run_scenario(at, o.seed, threads);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "  effect " << effect << " done in " << secs << " s\n";
    report.rows.insert(report.rows.end(), part.rows.begin(), part.rows.end());
  }

  fs::create_directories(o.out);
  RunManifest manifest;
  manifest.source = o.target;
  manifest.config_yaml = resolved_yaml;
  manifest.seed = o.seed;
  manifest.output_dir = o.out;
  manifest.threads = threads;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_text_file((fs::path(o.out) / name).string(), content);
    manifest.files.push_back({name, sha256_hex(content)});
  };
  emit("power.csv", format_power_csv(report));
  if (o.plots) {
    for (const auto& [scenario, rows] : by_scenario(report.rows)) emit(plot_name(scenario), render_power_svg(rows, scenario));
  }
  write_text_file((fs::path(o.out) / "manifest.json").string(), format_manifest(manifest));
  std::cerr << "wrote " << (fs::path(o.out) / "power.csv").string() << "\n";
  return 0;
}

int cmd_plot(const std::string& csv_path, const std::optional<std::string>& out) {
  const PowerReport report = parse_power_csv(read_text_file(csv_path));
  const fs::path dir = out ? fs::path(*out) : fs::path(csv_path).parent_path();
  if (!dir.empty()) fs::create_directories(dir);
  for (const auto& [scenario, rows] : by_scenario(report.rows)) {
    const fs::path file = dir / plot_name(scenario);
    write_text_file(file.string(), render_power_svg(rows, scenario));
    std::cout << file.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sample multivariate signal detection by permutation testing"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a config file or preset and write power.csv");
  run_cmd->add_option("target", run.target, "YAML config path or preset name")->required();
  run_cmd->add_option("--seed", run.seed, "Master seed");
  run_cmd->add_option("--reps", run.reps, "Replications per effect level")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--perms", run.perms, "Permutations per test")->check(CLI::PositiveNumber);
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--alpha", run.alpha, "Test level")->check(CLI::Range(0.0, 1.0));
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--pvalue-mode", run.pvalue_mode, "P-value convention")
      ->check(CLI::IsMember({"paper", "add-one"}));
  run_cmd->add_option("--tie-break", run.tie_break, "Randomized tie-breaking")->check(CLI::IsMember({"on", "off"}));
  bool no_plot = false;
  run_cmd->add_flag("--no-plot", no_plot, "Skip SVG plots");

  app.add_subcommand("list-presets", "List the embedded figure presets");

  std::string csv_path;
  std::optional<std::string> plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "Render SVG dot plots from a power.csv");
  plot_cmd->add_option("csv", csv_path, "power.csv path")->required();
  plot_cmd->add_option("--out", plot_out, "Output directory (default: next to the CSV)");

  int selftest_threads = 1;
  auto* selftest_cmd = app.add_subcommand("selftest", "Run the fast property checks");
  selftest_cmd->add_option("--threads", selftest_threads, "Threads for the determinism check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) {
      run.plots = !no_plot;
      return cmd_run(run);
    }
    if (app.got_subcommand("list-presets")) {
      for (const auto& name : preset_names()) std::cout << name << "\n";
      return 0;
    }
    if (*plot_cmd) return cmd_plot(csv_path, plot_out);
    if (*selftest_cmd) return run_selftest(std::cout, std::max(1, selftest_threads)) ? 0 : kExitRuntime;
  } catch (const ScenarioFailure& e) {
    std::cerr << "sigdet: runtime error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const Error& e) {
    std::cerr << "sigdet: " << e.what() << "\n";
    return e.code() == ErrorCode::ConfigError ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "sigdet: runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
