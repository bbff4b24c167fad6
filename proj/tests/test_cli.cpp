#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "asmp/cli.hpp"
#include "asmp/report.hpp"

using namespace asmp;
namespace fs = std::filesystem;

namespace {
int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"asmp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};
}  // namespace

TEST_CASE("run writes the five artifacts") {
  TempDir tmp("asmp_cli_run");
  const auto out = (tmp.path / "out").string();
  CHECK(run_cli({"run", "--preset", "dynamic", "--duration", "600", "--out", out}) == 0);
  for (const char* name :
       {"plane.csv", "trace.csv", "metrics.csv", "config.json", "manifest.json"})
    CHECK(fs::exists(fs::path(out) / name));
}

TEST_CASE("seed overrides land in the manifest") {
  TempDir tmp("asmp_cli_seed");
  const auto out = (tmp.path / "out").string();
  CHECK(run_cli({"run", "--preset", "dynamic", "--duration", "600", "--seed", "77",
                 "--out", out}) == 0);
  const std::string manifest = slurp(fs::path(out) / "manifest.json");
  CHECK(manifest.find("\"seed\": 77") != std::string::npos);
  CHECK(manifest.find("\"overrides\"") != std::string::npos);
  CHECK(manifest.find("\"77\"") != std::string::npos);
}

TEST_CASE("missing configuration is a usage error") {
  CHECK(run_cli({"run", "--config", "/nonexistent/nowhere.json"}) != 0);
  CHECK(run_cli({"run", "--preset", "no-such-preset"}) == 2);
  CHECK(run_cli({"run", "--preset", "dynamic", "--algorithm", "warp-drive"}) == 2);
  CHECK(run_cli({}) == 2);  // a subcommand is required
}

TEST_CASE("compare needs at least two algorithms and rejects unknown names") {
  TempDir tmp("asmp_cli_cmp_err");
  const auto out = (tmp.path / "out").string();
  CHECK(run_cli({"compare", "--preset", "dynamic", "--algorithms", "asa", "--out",
                 out}) == 2);
  CHECK(run_cli({"compare", "--preset", "dynamic", "--algorithms", "asa,zigzag",
                 "--out", out}) == 2);
}

TEST_CASE("compare reports reductions against the fixed baseline") {
  TempDir tmp("asmp_cli_cmp");
  const auto out = (tmp.path / "out").string();
  CHECK(run_cli({"compare", "--preset", "dynamic", "--duration", "1200",
                 "--algorithms", "fixed,asa", "--out", out}) == 0);
  const std::string report = slurp(fs::path(out) / "report.csv");
  CHECK(report.find("fixed") != std::string::npos);
  CHECK(report.find("asa") != std::string::npos);
  CHECK(fs::exists(fs::path(out) / "manifest.json"));
}

TEST_CASE("comparing the same algorithm twice yields identical rows") {
  Scenario sc = Scenario::dynamic_preset();
  sc.duration_s = 900.0;
  const RunReport rep =
      compare_algorithms(sc, {AlgorithmVariant::Asa, AlgorithmVariant::Asa});
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].consumed_mwh == rep.rows[1].consumed_mwh);
  CHECK(rep.rows[0].sample_count == rep.rows[1].sample_count);
  CHECK(rep.rows[0].mse == rep.rows[1].mse);
}

TEST_CASE("a config file round-trips through the loader") {
  TempDir tmp("asmp_cli_cfg");
  const auto cfg_path = tmp.path / "cfg.json";
  {
    std::ofstream f(cfg_path);
    f << R"({"preset": "dynamic", "duration_s": 700, "seed": 3,
             "protocol": {"spacing": 0.5}})";
  }
  const Scenario sc = Scenario::from_json_file(cfg_path.string());
  CHECK(sc.duration_s == 700.0);
  CHECK(sc.seed == 3);
  CHECK(sc.node.grid.spacing == 0.5);
  // canonical dump parses back to the same hash
  const Scenario again = Scenario::from_json_text(sc.to_json_text());
  CHECK(again.config_hash() == sc.config_hash());
}

TEST_CASE("reduction arithmetic matches the summed rows") {
  Scenario sc = Scenario::dynamic_preset();
  sc.duration_s = 1500.0;
  const RunReport rep =
      compare_algorithms(sc, {AlgorithmVariant::Fixed, AlgorithmVariant::Asa});
  REQUIRE(rep.rows.size() == 2);
  const auto& fixed = rep.rows[0];
  const auto& asa = rep.rows[1];
  CHECK(asa.energy_reduction_vs_fixed ==
        doctest::Approx(1.0 - asa.consumed_mwh / fixed.consumed_mwh));
  CHECK(asa.sample_reduction_vs_fixed ==
        doctest::Approx(1.0 - static_cast<double>(asa.sample_count) /
                                  static_cast<double>(fixed.sample_count)));
}

TEST_CASE("the profile preset name resolves and unknown names fail") {
  const Scenario sc = Scenario::from_json_text(
      R"({"profile": {"preset": "table4-default", "tx_mw": 12.0}})");
  CHECK(sc.node.profile.tx_mw == 12.0);
  CHECK(sc.node.profile.wake_mw == PowerProfile::table4_default().wake_mw);
  CHECK_THROWS(Scenario::from_json_text(R"({"profile": {"preset": "nope"}})"));
}
