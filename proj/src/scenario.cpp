// SPDX-License-Identifier: Apache-2.0

#include "scsim/scenario.hpp"

#include <cmath>
#include <string>

namespace scsim {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void validate(const ScenarioConfig& config) {
  if (config.groups.empty()) throw config_error("groups: at least one group required");
  for (std::size_t g = 0; g < config.groups.size(); ++g) {
    const std::string path = "groups[" + std::to_string(g) + "]";
    if (config.groups[g].count < 1) throw config_error(path + ".count: must be >= 1");
    if (!std::isfinite(config.groups[g].mean_snr_db)) {
      throw config_error(path + ".mean_snr_db: must be finite");
    }
  }
  if (config.window < 1) throw config_error("window: must be >= 1");
  if (config.n_blocks < 10LL * config.window) {
    throw config_error("n_blocks: must be at least 10 * window");
  }
  if (!(config.scheduled_threshold > 0.0)) {
    throw config_error("scheduled_threshold: must be positive");
  }
  if (config.policy.kind == PolicyKind::kSuperpositionCapped && config.policy.k_max < 1) {
    throw config_error("policy.k_max: must be >= 1 for SC_capped");
  }
  if (config.sweep) {
    if (config.sweep->values.empty()) throw config_error("sweep.values: must be non-empty");
    const int group = sweep_group_index(config.sweep->parameter);
    if (group >= static_cast<int>(config.groups.size())) {
      throw config_error("sweep.parameter: group out of range");
    }
  }
}

std::vector<FadingSpec> build_scenario(const ScenarioConfig& config) {
  validate(config);
  std::vector<FadingSpec> users;
  for (const GroupConfig& group : config.groups) {
    for (int i = 0; i < group.count; ++i) {
      users.push_back(FadingSpec{db_to_linear(group.mean_snr_db), false});
    }
  }
  return users;
}

std::vector<int> group_of_user(const ScenarioConfig& config) {
  std::vector<int> groups;
  for (std::size_t g = 0; g < config.groups.size(); ++g) {
    for (int i = 0; i < config.groups[g].count; ++i) groups.push_back(static_cast<int>(g));
  }
  return groups;
}

int sweep_group_index(const std::string& parameter) {
  const std::string prefix = "group";
  const std::string suffix = ".mean_snr_db";
  if (parameter.size() == prefix.size() + 1 + suffix.size() &&
      parameter.compare(0, prefix.size(), prefix) == 0 &&
      parameter.compare(prefix.size() + 1, suffix.size(), suffix) == 0) {
    const char letter = parameter[prefix.size()];
    if (letter >= 'A' && letter <= 'Z') return letter - 'A';
  }
  throw config_error("sweep.parameter: expected group<Letter>.mean_snr_db, got '" + parameter + "'");
}

}  // namespace scsim
