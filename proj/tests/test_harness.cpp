// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "scsim/harness.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace scsim;
namespace fs = std::filesystem;

namespace {

json base_config_json() {
  return json::parse(R"({
    "groups": [{"count": 2, "mean_snr_db": 0.0}, {"count": 3, "mean_snr_db": 10.0}],
    "n_blocks": 2000,
    "window": 100,
    "seed": 9,
    "policy": {"kind": "SC", "utility": "proportional_fair"}
  })");
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("scsim_test_" + std::to_string(std::rand()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& file) {
  std::ifstream in(file);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (const char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("config parsing accepts the documented schema") {
  const ScenarioConfig config = parse_config(base_config_json());
  CHECK(config.groups.size() == 2);
  CHECK(config.groups[1].count == 3);
  CHECK(config.n_blocks == 2000);
  CHECK(config.window == 100);
  CHECK(config.seed == 9);
  CHECK(config.policy.kind == PolicyKind::kSuperposition);
  CHECK(config.policy.utility == Utility::kProportionalFair);
  CHECK(config.scheduled_threshold == 1e-9);
  CHECK(!config.sweep.has_value());
}

TEST_CASE("config parsing rejects unknown and misplaced keys") {
  json j = base_config_json();
  j["extra"] = 1;
  CHECK_THROWS_AS(parse_config(j), config_error);

  j = base_config_json();
  j["groups"][0]["label"] = "A";
  CHECK_THROWS_AS(parse_config(j), config_error);

  j = base_config_json();
  j["policy"]["k_max"] = 2;  // only valid for SC_capped
  CHECK_THROWS_AS(parse_config(j), config_error);

  j = base_config_json();
  j["policy"] = {{"kind", "SC_capped"}};  // k_max missing
  CHECK_THROWS_AS(parse_config(j), config_error);

  j = base_config_json();
  j["policy"] = {{"kind", "RR"}, {"utility", "sum_rate"}};
  CHECK_THROWS_AS(parse_config(j), config_error);

  j = base_config_json();
  j["policy"]["kind"] = "PF";
  CHECK_THROWS_AS(parse_config(j), config_error);

  j = base_config_json();
  j.erase("policy");
  CHECK_THROWS_AS(parse_config(j), config_error);
}

TEST_CASE("capped policy and sweep sections parse") {
  json j = base_config_json();
  j["policy"] = {{"kind", "SC_capped"}, {"k_max", 2}, {"greedy", false}};
  j["sweep"] = {{"parameter", "groupB.mean_snr_db"}, {"values", {0.0, 5.0, 10.0}}};
  const ScenarioConfig config = parse_config(j);
  CHECK(config.policy.kind == PolicyKind::kSuperpositionCapped);
  CHECK(config.policy.k_max == 2);
  CHECK(config.policy.greedy == false);
  REQUIRE(config.sweep.has_value());
  CHECK(config.sweep->parameter == "groupB.mean_snr_db");
  CHECK(config.sweep->values == std::vector<double>{0.0, 5.0, 10.0});
}

TEST_CASE("config file loading distinguishes io and parse errors") {
  CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), io_error);
  TempDir dir;
  const fs::path bad = dir.path / "bad.json";
  std::ofstream(bad) << "{ not json";
  CHECK_THROWS_AS(load_config_file(bad), config_error);
  const fs::path good = dir.path / "good.json";
  std::ofstream(good) << base_config_json().dump();
  CHECK(load_config_file(good).groups.size() == 2);
}

TEST_CASE("experiment metrics are normalized and consistent") {
  const ScenarioConfig config = parse_config(base_config_json());
  const ExperimentReport report = run_experiment(config);

  double count_total = 0.0;
  for (const auto& [counts, probability] : report.sched_count_dist) count_total += probability;
  CHECK(count_total == doctest::Approx(1.0).epsilon(1e-9));

  double p2_total = 0.0;
  for (const double probability : report.p2_dist) p2_total += probability;
  CHECK(p2_total == doctest::Approx(1.0).epsilon(1e-9));

  double per_user_sum = 0.0;
  for (const double r : report.per_user_throughput) per_user_sum += r;
  CHECK(report.aggregate_throughput == doctest::Approx(per_user_sum).epsilon(1e-9));

  CHECK(report.runtime.dominance_violations == 0);
  CHECK(report.runtime.blocks == 2000);
  for (const double r : report.per_user_throughput) CHECK(r >= 0.0);
}

TEST_CASE("same config and seed give byte-identical canonical reports") {
  const ScenarioConfig config = parse_config(base_config_json());
  const ExperimentReport a = run_experiment(config);
  const ExperimentReport b = run_experiment(config);
  CHECK(canonical_json(a) == canonical_json(b));
}

TEST_CASE("a single-point sweep equals a plain run at that value") {
  ScenarioConfig config = parse_config(base_config_json());
  const SweepSeries series = run_sweep(config, "groupB.mean_snr_db", {4.0});
  config.groups[1].mean_snr_db = 4.0;
  const ExperimentReport direct = run_experiment(config);
  REQUIRE(series.reports.size() == 1);
  CHECK(canonical_json(series.reports[0]) == canonical_json(direct));
}

TEST_CASE("round-robin throughput of the untouched group is flat across a sweep") {
  json j = base_config_json();
  j["policy"] = {{"kind", "RR"}};
  j["n_blocks"] = 20000;
  const ScenarioConfig config = parse_config(j);
  const SweepSeries series = run_sweep(config, "groupB.mean_snr_db", {0.0, 10.0, 20.0});
  const double reference = series.reports[0].group_throughput[0];
  for (const ExperimentReport& report : series.reports) {
    CHECK(std::abs(report.group_throughput[0] - reference) <= 0.05 * reference);
  }
}

TEST_CASE("json round trip preserves the report exactly") {
  const ScenarioConfig config = parse_config(base_config_json());
  const ExperimentReport report = run_experiment(config);
  CHECK(report_from_json(to_json(report)) == report);

  const SweepSeries series = run_sweep(config, "groupA.mean_snr_db", {0.0, 3.0});
  CHECK(series_from_json(to_json(series)) == series);
}

TEST_CASE("emitted files") {
  const ScenarioConfig config = parse_config(base_config_json());
  const ExperimentReport report = run_experiment(config);
  TempDir dir;

  SUBCASE("json report lands atomically") {
    emit(report, Format::kJson, dir.path);
    CHECK(fs::exists(dir.path / "report.json"));
    CHECK(!fs::exists(dir.path / "report.json.tmp"));
    const ExperimentReport parsed = report_from_json(json::parse(slurp(dir.path / "report.json")));
    CHECK(parsed == report);
  }
  SUBCASE("csv schema") {
    emit(report, Format::kCsv, dir.path);
    const std::string throughput = slurp(dir.path / "throughput.csv");
    CHECK(throughput.rfind("sweep_value,user_id,group,throughput\n", 0) == 0);
    CHECK(count_lines(throughput) == 1 + 5);  // header + one row per user
    CHECK(fs::exists(dir.path / "sched_count_dist.csv"));
    CHECK(fs::exists(dir.path / "p2_dist.csv"));
  }
  SUBCASE("sweep csv row count is users times points") {
    const SweepSeries series = run_sweep(config, "groupB.mean_snr_db", {0.0, 6.0});
    emit(series, Format::kCsv, dir.path);
    CHECK(count_lines(slurp(dir.path / "throughput.csv")) == 1 + 5 * 2);
  }
  SUBCASE("empty sweep emits headers only") {
    const SweepSeries empty{"groupB.mean_snr_db", {}, {}};
    emit(empty, Format::kCsv, dir.path);
    CHECK(slurp(dir.path / "throughput.csv") == "sweep_value,user_id,group,throughput\n");
    CHECK(slurp(dir.path / "p2_dist.csv") == "sweep_value,bucket_lo,bucket_hi,probability\n");
    emit(empty, Format::kJson, dir.path);
    const SweepSeries parsed = series_from_json(json::parse(slurp(dir.path / "sweep.json")));
    CHECK(parsed == empty);
  }
}

TEST_CASE("p2 tail helper") {
  ExperimentReport report;
  report.p2_dist = {0.1, 0.2, 0.3, 0.25, 0.15};
  CHECK(report.p2_tail(0.8) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(report.p2_tail(0.9) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK_THROWS_AS(report.p2_tail(0.85), contract_error);
}

TEST_CASE("verification smoke run") {
  VerifyOptions options;
  options.instances = 30;
  options.l_min = 2;
  options.l_max = 6;
  options.seed = 5;
  const VerifyReport report = verify(options);
  CHECK(report.passed);
  CHECK(report.invariant_violations == 0);
  CHECK(report.max_relative_gap <= kVerifyGapTol);
  CHECK(report.max_kkt_residual <= kVerifyKktTol);
}

#ifdef SCSIM_CLI_PATH
TEST_CASE("cli exit codes") {
  const std::string cli = SCSIM_CLI_PATH;
  TempDir dir;
  CHECK(std::system((cli + " example-l7 > /dev/null").c_str()) == 0);
  CHECK(std::system((cli + " verify --instances 5 --lmax 4 > /dev/null").c_str()) == 0);

  // missing config file -> io error (3)
  const int io_status =
      std::system((cli + " run --config /nonexistent.json > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(io_status) == 3);

  // malformed config -> config error (2)
  const fs::path bad = dir.path / "bad.json";
  std::ofstream(bad) << "{\"groups\": []}";
  const int config_status =
      std::system((cli + " run --config " + bad.string() + " > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(config_status) == 2);

  // unknown flag -> usage/config error (2)
  const int usage_status = std::system((cli + " run --bogus > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(usage_status) == 2);

  // a good run writes its report
  const fs::path good = dir.path / "good.json";
  std::ofstream(good) << base_config_json().dump();
  const fs::path out = dir.path / "out";
  const int run_status = std::system(
      (cli + " run --config " + good.string() + " --out " + out.string() + " > /dev/null").c_str());
  CHECK(run_status == 0);
  CHECK(fs::exists(out / "report.json"));
}
#endif

TEST_SUITE_END();
