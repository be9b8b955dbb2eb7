// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: run one experiment, sweep a group's average SNR,
// cross-check the allocator against the brute-force oracle, or print the
// bundled seven-user example with full diagnostics.

#include <CLI11.hpp>

#include "scsim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

namespace {

using namespace scsim;

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  const auto colon = std::count(text.begin(), text.end(), ':');
  if (colon == 2) {
    double start = 0.0, stop = 0.0, step = 0.0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0.0) {
      throw config_error("--values: expected start:stop:step with positive step");
    }
    const int count = static_cast<int>(std::floor((stop - start) / step + 0.5)) + 1;
    for (int i = 0; i < count; ++i) values.push_back(start + i * step);
    return values;
  }
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t end = text.find(',', begin);
    const std::string token = text.substr(begin, end == std::string::npos ? end : end - begin);
    try {
      values.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw config_error("--values: cannot parse '" + token + "'");
    }
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  if (values.empty()) throw config_error("--values: empty list");
  return values;
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw config_error("--format: expected csv or json");
}

void print_report_summary(const ExperimentReport& report) {
  std::printf("aggregate throughput: %.6f bits/channel use\n", report.aggregate_throughput);
  for (std::size_t g = 0; g < report.group_throughput.size(); ++g) {
    std::printf("group %c mean throughput: %.6f\n", static_cast<char>('A' + g),
                report.group_throughput[g]);
  }
  std::printf("blocks: %lld (%.0f blocks/s), dominance violations: %lld\n", report.runtime.blocks,
              report.runtime.blocks_per_second, report.runtime.dominance_violations);
}

int command_run(const std::string& config_path, const std::string& out_dir,
                const std::string& format) {
  const ScenarioConfig config = load_config_file(config_path);
  const ExperimentReport report = run_experiment(config);
  emit(report, parse_format(format), out_dir);
  print_report_summary(report);
  std::printf("report written to %s\n", out_dir.c_str());
  return 0;
}

int command_sweep(const std::string& config_path, std::string parameter, const std::string& values_text,
                  const std::string& out_dir, const std::string& format) {
  const ScenarioConfig config = load_config_file(config_path);
  std::vector<double> values;
  if (!values_text.empty()) {
    values = parse_values(values_text);
  } else if (config.sweep) {
    values = config.sweep->values;
  } else {
    throw config_error("sweep: need --values or a sweep section in the config");
  }
  if (parameter.empty()) {
    if (!config.sweep) throw config_error("sweep: need --param or a sweep section in the config");
    parameter = config.sweep->parameter;
  }
  const SweepSeries series = run_sweep(config, parameter, values);
  emit(series, parse_format(format), out_dir);
  for (std::size_t i = 0; i < series.reports.size(); ++i) {
    std::printf("%s = %g: aggregate %.6f\n", parameter.c_str(), series.values[i],
                series.reports[i].aggregate_throughput);
  }
  std::printf("series written to %s\n", out_dir.c_str());
  return 0;
}

int command_verify(int instances, int l_min, int l_max, std::uint64_t seed, double resolution) {
  VerifyOptions options;
  options.instances = instances;
  options.l_min = l_min;
  options.l_max = l_max;
  options.seed = seed;
  options.resolution = resolution;
  const VerifyReport report = verify(options);
  std::printf("instances:            %d (L in [%d, %d])\n", report.instances, l_min, l_max);
  std::printf("max relative gap:     %.3e (tolerance %.0e)\n", report.max_relative_gap,
              kVerifyGapTol);
  std::printf("max KKT residual:     %.3e (tolerance %.0e)\n", report.max_kkt_residual,
              kVerifyKktTol);
  std::printf("max two-user diff:    %.3e (tolerance %.0e)\n", report.max_two_user_diff,
              kVerifyTwoUserTol);
  std::printf("invariant violations: %lld\n", report.invariant_violations);
  for (const std::string& failure : report.failures) {
    std::printf("  %s\n", failure.c_str());
  }
  std::printf("%s\n", report.passed ? "PASS" : "FAIL");
  return report.passed ? 0 : 1;
}

int command_example() {
  const ReferenceInstance ref = seven_user_instance();
  PurgeDiagnostics diag;
  const PowerAllocation alloc = allocate(ref.state, ref.weights, &diag);

  std::printf("user  snr    weight   marginal@0  marginal@1\n");
  for (Index l = 0; l < ref.state.size(); ++l) {
    std::printf("%4lld  %5.2f  %6.2f   %9.2f  %9.2f\n", static_cast<long long>(l + 1),
                ref.state.snr[l], ref.weights.beta[l], diag.marginal_zero[l],
                diag.marginal_full[l]);
  }
  auto print_set = [](const char* label, const std::vector<Index>& set) {
    std::printf("%s {", label);
    for (std::size_t i = 0; i < set.size(); ++i) {
      std::printf("%s%lld", i == 0 ? "" : ", ", static_cast<long long>(set[i] + 1));
    }
    std::printf("}\n");
  };
  print_set("after weight/marginal sweep:   ", diag.after_weight_purge);
  print_set("after zero-marginal sweep:     ", diag.after_marginal_purge);
  print_set("after crossing-order sweep:    ", diag.after_crossing_purge);
  std::printf("adjacent crossings:");
  for (const double c : diag.crossings) std::printf(" %.4f", c);
  std::printf("\n");
  std::printf("power fractions:\n");
  for (const Index l : alloc.active) {
    std::printf("  user %lld: %.4f\n", static_cast<long long>(l + 1), alloc.p[l]);
  }
  const double objective =
      weighted_objective(ref.state, ref.weights, alloc, RateModel::kSuperposition);
  std::printf("weighted objective: %.6f\n", objective);

  // Median wall time of one full allocation, diagnostics included.
  std::vector<double> samples;
  for (int rep = 0; rep < 201; ++rep) {
    PurgeDiagnostics timing_diag;
    const auto start = std::chrono::steady_clock::now();
    const PowerAllocation repeat = allocate(ref.state, ref.weights, &timing_diag);
    const auto stop = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double, std::micro>(stop - start).count());
    if (repeat.active.size() != alloc.active.size()) return 1;  // keep the call alive
  }
  std::nth_element(samples.begin(), samples.begin() + samples.size() / 2, samples.end());
  std::printf("allocation runtime: %.2f us (median of %zu runs)\n", samples[samples.size() / 2],
              samples.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superposition-coded downlink resource allocation and simulation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string format = "json";
  std::string parameter;
  std::string values_text;
  int instances = 500;
  int l_min = 2;
  int l_max = 8;
  std::uint64_t seed = 1;
  double resolution = 1e-3;

  CLI::App* run = app.add_subcommand("run", "Run one experiment from a config file");
  run->add_option("--config", config_path, "JSON scenario config")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--format", format, "csv or json");

  CLI::App* sweep = app.add_subcommand("sweep", "Run one experiment per swept parameter value");
  sweep->add_option("--config", config_path, "JSON scenario config")->required();
  sweep->add_option("--param", parameter, "Swept parameter, e.g. groupB.mean_snr_db");
  sweep->add_option("--values", values_text, "start:stop:step or comma-separated list");
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--format", format, "csv or json");

  CLI::App* verify_cmd = app.add_subcommand("verify", "Cross-check the allocator against the oracle");
  verify_cmd->add_option("--instances", instances, "Number of random instances");
  verify_cmd->add_option("--lmin", l_min, "Smallest instance size");
  verify_cmd->add_option("--lmax", l_max, "Largest instance size");
  verify_cmd->add_option("--seed", seed, "Instance generator seed");
  verify_cmd->add_option("--resolution", resolution, "Oracle grid resolution");

  CLI::App* example = app.add_subcommand("example-l7", "Print the seven-user reference instance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return command_run(config_path, out_dir, format);
    if (sweep->parsed()) return command_sweep(config_path, parameter, values_text, out_dir, format);
    if (verify_cmd->parsed()) return command_verify(instances, l_min, l_max, seed, resolution);
    if (example->parsed()) return command_example();
  } catch (const scsim::config_error& error) {
    std::fprintf(stderr, "config error: %s\n", error.what());
    return 2;
  } catch (const scsim::io_error& error) {
    std::fprintf(stderr, "io error: %s\n", error.what());
    return 3;
  } catch (const std::exception& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 1;
  }
  return 2;
}
