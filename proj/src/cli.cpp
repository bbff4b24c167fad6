#include "asmp/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asmp/report.hpp"
#include "asmp/scenario.hpp"
#include "asmp/sim.hpp"

namespace asmp {

namespace {

namespace fs = std::filesystem;

// Bad flags or bad configuration, as opposed to a failed run.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::string trace_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> duration_s;
  std::optional<int> nodes;
};

Scenario build_scenario(const CommonOptions& opt,
                        std::map<std::string, std::string>& overrides) {
  Scenario sc;
  if (!opt.config_path.empty()) {
    sc = Scenario::from_json_file(opt.config_path);
  } else if (opt.preset == "dynamic") {
    sc = Scenario::dynamic_preset();
  } else if (opt.preset == "open-access") {
    sc = Scenario::open_access_preset(opt.trace_path);
  } else if (!opt.preset.empty()) {
    throw UsageError("unknown preset '" + opt.preset +
                     "' (expected dynamic or open-access)");
  }
  if (!opt.trace_path.empty()) {
    sc.signal.kind = SignalKind::CsvTrace;
    sc.signal.csv_path = opt.trace_path;
    overrides["trace"] = opt.trace_path;
  }
  if (opt.seed) {
    sc.seed = *opt.seed;
    overrides["seed"] = std::to_string(*opt.seed);
  }
  if (opt.duration_s) {
    sc.duration_s = *opt.duration_s;
    overrides["duration_s"] = std::to_string(*opt.duration_s);
  }
  if (opt.nodes) {
    sc.node_count = *opt.nodes;
    overrides["nodes"] = std::to_string(*opt.nodes);
  }
  return sc;
}

void ensure_valid(const Scenario& sc) {
  const auto problems = sc.validate();
  if (problems.empty()) return;
  std::string msg = "configuration problems:";
  for (const auto& p : problems) msg += "\n  " + p;
  throw UsageError(msg);
}

int do_run(const CommonOptions& opt, const std::string& algorithm) {
  std::map<std::string, std::string> overrides;
  Scenario sc = build_scenario(opt, overrides);
  if (!algorithm.empty()) {
    const auto v = algorithm_from_string(algorithm);
    if (!v) throw UsageError("unknown algorithm '" + algorithm + "'");
    sc.node.algorithm = *v;
    overrides["algorithm"] = algorithm;
  }
  ensure_valid(sc);

  const RunResult result = run(sc);

  fs::create_directories(opt.out_dir);
  const auto path = [&](const char* name) { return (fs::path(opt.out_dir) / name).string(); };
  {
    std::ofstream f(path("plane.csv"));
    result.plane.write_csv(f);
  }
  {
    std::ofstream f(path("trace.csv"));
    result.write_trace_csv(f);
  }
  {
    std::ofstream f(path("metrics.csv"));
    write_metrics_csv(f, sc, result);
  }
  {
    std::ofstream f(path("config.json"));
    f << sc.to_json_text() << "\n";
  }
  {
    std::ofstream f(path("manifest.json"));
    write_manifest_json(f, sc,
                        {"plane.csv", "trace.csv", "metrics.csv", "config.json"},
                        overrides);
  }

  std::cout << "run '" << sc.name << "' seed=" << sc.seed << " algorithm="
            << to_string(sc.node.algorithm) << ": " << result.metrics.sample_count
            << " samples, " << result.metrics.predicted_count << " predicted, "
            << result.metrics.consumed_mwh_total << " mWh\n";
  std::cout << "artifacts in " << opt.out_dir << "\n";
  return 0;
}

int do_compare(const CommonOptions& opt, const std::vector<std::string>& algorithms) {
  if (algorithms.size() < 2)
    throw UsageError("compare needs at least two algorithms");
  std::vector<AlgorithmVariant> variants;
  std::vector<std::string> unknown;
  for (const auto& a : algorithms) {
    const auto v = algorithm_from_string(a);
    if (v) variants.push_back(*v);
    else unknown.push_back(a);
  }
  if (!unknown.empty()) {
    std::string msg = "unknown algorithms:";
    for (const auto& u : unknown) msg += " " + u;
    throw UsageError(msg);
  }

  std::map<std::string, std::string> overrides;
  Scenario sc = build_scenario(opt, overrides);
  ensure_valid(sc);

  const RunReport report = compare_algorithms(sc, variants);

  fs::create_directories(opt.out_dir);
  {
    std::ofstream f((fs::path(opt.out_dir) / "report.csv").string());
    report.write_csv(f);
  }
  {
    std::ofstream f((fs::path(opt.out_dir) / "manifest.json").string());
    write_manifest_json(f, sc, {"report.csv"}, overrides);
  }
  report.write_table(std::cout);
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Adaptive sampling simulator for energy-harvesting sensor networks"};
  app.require_subcommand(1);

  CommonOptions run_opt, cmp_opt;
  std::string algorithm;
  std::vector<std::string> algorithms;

  const auto add_common = [](CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config_path, "scenario JSON file");
    cmd->add_option("--preset", opt.preset, "built-in scenario: dynamic | open-access");
    cmd->add_option("--trace", opt.trace_path, "signal trace CSV (time,value)");
    cmd->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", opt.seed, "override the scenario seed");
    cmd->add_option("--duration", opt.duration_s, "override the duration, seconds");
    cmd->add_option("--nodes", opt.nodes, "override the node count");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "execute one scenario");
  add_common(run_cmd, run_opt);
  run_cmd->add_option("--algorithm", algorithm,
                      "fixed | asa | asa-casa | asa-rasa | asmp");

  CLI::App* cmp_cmd = app.add_subcommand("compare",
                                         "run several algorithms on the same signal");
  add_common(cmp_cmd, cmp_opt);
  cmp_cmd->add_option("--algorithms", algorithms, "comma-separated variant list")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) return do_run(run_opt, algorithm);
    if (cmp_cmd->parsed()) return do_compare(cmp_opt, algorithms);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace asmp
