// SPDX-License-Identifier: Apache-2.0
//
// Experiment metrics and their serialized forms. JSON output preserves
// insertion order and round-trips exactly; CSV output follows the schemas
// documented in the README (RFC 4180 quoting).

#pragma once

#include <json.hpp>

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace scsim {

/// Edges of the power-concentration histogram over P2, the largest total
/// power held by any pair of users in a block.
inline constexpr std::array<double, 6> kP2BucketEdges = {0.0, 0.70, 0.80, 0.90, 0.95, 1.0};

struct RuntimeStats {
  long long blocks = 0;
  double wall_seconds = 0.0;
  double blocks_per_second = 0.0;
  long long dominance_violations = 0;  // blocks where the SC objective fell below the best vertex

  bool operator==(const RuntimeStats&) const = default;
};

struct ExperimentReport {
  std::vector<double> per_user_throughput;  // bits per channel use
  double aggregate_throughput = 0.0;
  std::vector<double> group_throughput;  // mean over the users of each group
  std::vector<int> user_group;           // group index per user

  /// Joint empirical distribution of per-group scheduled-user counts.
  std::map<std::vector<int>, double> sched_count_dist;

  /// Probability of P2 falling in each kP2BucketEdges interval (last one
  /// closed on the right).
  std::array<double, 5> p2_dist{};

  RuntimeStats runtime;

  bool operator==(const ExperimentReport&) const = default;

  /// Pr{P2 > threshold} evaluated on the bucketed distribution; threshold
  /// must be one of the interior bucket edges.
  double p2_tail(double threshold) const;
};

struct SweepSeries {
  std::string parameter;
  std::vector<double> values;
  std::vector<ExperimentReport> reports;  // one per value

  bool operator==(const SweepSeries&) const = default;
};

enum class Format { kCsv, kJson };

using json = nlohmann::ordered_json;

json to_json(const ExperimentReport& report);
json to_json(const SweepSeries& series);
ExperimentReport report_from_json(const json& j);
SweepSeries series_from_json(const json& j);

/// Serialization stripped of volatile fields (runtime stats); two runs with
/// the same config and seed produce byte-identical canonical dumps.
std::string canonical_json(const ExperimentReport& report);
std::string canonical_json(const SweepSeries& series);

/// Writes `content` to `path` atomically (temp file + rename).
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace scsim
