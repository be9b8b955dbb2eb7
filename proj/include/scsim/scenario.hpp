// SPDX-License-Identifier: Apache-2.0
//
// Experiment scenarios: groups of statistically identical users, the
// simulation horizon, and an optional parameter sweep.

#pragma once

#include "scsim/policy.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace scsim {

/// A set of users sharing one average SNR. Groups are labeled A, B, ... in
/// declaration order and expanded in that order into user indices.
struct GroupConfig {
  int count = 1;
  double mean_snr_db = 0.0;
};

struct SweepConfig {
  std::string parameter;       // e.g. "groupB.mean_snr_db"
  std::vector<double> values;  // one experiment per value
};

struct ScenarioConfig {
  std::vector<GroupConfig> groups;
  long long n_blocks = 100000;
  int window = 1000;
  std::uint64_t seed = 1;
  PolicySpec policy;
  double scheduled_threshold = 1e-9;  // a user counts as scheduled when p > this
  std::optional<SweepConfig> sweep;
};

/// Power dB to linear: 10^(dB/10).
double db_to_linear(double db);

/// Throws config_error (message carries the offending field path) unless the
/// scenario is well formed: at least one group, counts >= 1, window >= 1,
/// n_blocks >= 10 * window, positive threshold.
void validate(const ScenarioConfig& config);

/// Expands the groups into one FadingSpec per user, converting dB means to
/// linear scale once.
std::vector<FadingSpec> build_scenario(const ScenarioConfig& config);

/// Group index (0-based) of each user, in expansion order.
std::vector<int> group_of_user(const ScenarioConfig& config);

/// Parses a sweepable parameter name of the form "group<Letter>.mean_snr_db"
/// into the group index; throws config_error otherwise.
int sweep_group_index(const std::string& parameter);

}  // namespace scsim
