// SPDX-License-Identifier: Apache-2.0
//
// Experiment runner, allocator-vs-oracle verification, and report emission.
// These back the CLI subcommands.

#pragma once

#include "scsim/allocator.hpp"
#include "scsim/report.hpp"
#include "scsim/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace scsim {

/// Simulates config.n_blocks blocks under config.policy and collects all
/// metrics over the blocks after the warm-up window. Allocator failures are
/// rethrown with the block index in the message.
ExperimentReport run_experiment(const ScenarioConfig& config);

/// One run_experiment per value of the swept parameter. Point i runs with
/// seed config.seed + i, so a single-point sweep reproduces run_experiment
/// exactly. Points execute concurrently.
SweepSeries run_sweep(const ScenarioConfig& config, const std::string& parameter,
                      const std::vector<double>& values);

struct VerifyOptions {
  int instances = 500;
  int l_min = 2;
  int l_max = 8;
  std::uint64_t seed = 1;
  double resolution = 1e-3;
};

struct VerifyReport {
  int instances = 0;
  double max_relative_gap = 0.0;     // allocator vs dynamic-programming oracle
  double max_kkt_residual = 0.0;     // stationarity spread at the returned point
  double max_two_user_diff = 0.0;    // closed form vs pipeline, two-user instances
  long long invariant_violations = 0;
  std::vector<std::string> failures;  // human-readable, one per violation (capped)
  bool passed = false;
};

/// Random-instance cross-check of the closed-form allocator against the
/// brute-force oracle, plus structural invariant checks and the bundled
/// seven-user reference instance. Failures are reported, not thrown.
VerifyReport verify(const VerifyOptions& options);

/// Thresholds used by verify().
inline constexpr double kVerifyGapTol = 1e-6;       // relative objective gap
inline constexpr double kVerifyKktTol = 1e-4;       // stationarity residual
inline constexpr double kVerifyTwoUserTol = 1e-12;  // closed form agreement

/// Numerical stationarity residual of an allocation: central finite
/// differences of the raw objective (step 1e-7, one-sided on the boundary),
/// max spread across active users plus any inactive user's excess over the
/// active level.
double kkt_residual(const AllocationProblem& problem, const PowerAllocation& sorted_alloc);

/// The bundled seven-user reference instance used by `example-l7` and the
/// acceptance suite.
struct ReferenceInstance {
  ChannelState state;
  WeightVector weights;
};
ReferenceInstance seven_user_instance();

/// Writes a report (or series) into `out_dir`. JSON produces report.json /
/// sweep.json; CSV produces throughput.csv, sched_count_dist.csv and
/// p2_dist.csv. Throws io_error with path context on failure.
void emit(const ExperimentReport& report, Format format, const std::filesystem::path& out_dir);
void emit(const SweepSeries& series, Format format, const std::filesystem::path& out_dir);

/// Config file loading (JSON matching the ScenarioConfig field names;
/// unknown keys rejected).
ScenarioConfig parse_config(const json& j);
ScenarioConfig load_config_file(const std::filesystem::path& path);

}  // namespace scsim
