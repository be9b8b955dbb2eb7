// SPDX-License-Identifier: Apache-2.0

#include "scsim/constrained.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace scsim {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw contract_error(message);
}

// Restricted optimum: solve the sub-instance on `support` (ascending
// original indices) and scatter back to full length.
PowerAllocation solve_support(const ChannelState& state, const WeightVector& weights,
                              const std::vector<Index>& support) {
  Vec g(static_cast<Index>(support.size()));
  Vec b(static_cast<Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) {
    g[static_cast<Index>(i)] = state.snr[support[i]];
    b[static_cast<Index>(i)] = weights.beta[support[i]];
  }
  const PowerAllocation sub = allocate(ChannelState(std::move(g)), WeightVector(std::move(b)));
  Vec p = Vec::Zero(state.size());
  for (std::size_t i = 0; i < support.size(); ++i) {
    p[support[i]] = sub.p[static_cast<Index>(i)];
  }
  return PowerAllocation(std::move(p));
}

ConstrainedResult make_result(const ChannelState& state, const WeightVector& weights,
                              PowerAllocation alloc) {
  const double objective = sc_objective_any(state, weights, alloc);
  std::vector<Index> active = alloc.active;
  return ConstrainedResult{std::move(active), std::move(alloc), objective};
}

// Supports of size <= k, capped; avoids overflow by saturating.
double support_count(Index n, int k) {
  double total = 0.0;
  double binom = 1.0;
  for (int i = 1; i <= k; ++i) {
    binom *= static_cast<double>(n - i + 1) / static_cast<double>(i);
    total += binom;
    if (total > 4.0 * kEnumerationBudget) break;
  }
  return total;
}

}  // namespace

ConstrainedResult greedy_allocate(const ChannelState& state, const WeightVector& weights,
                                  int k_max) {
  require(k_max >= 1, "greedy_allocate: k_max must be positive");
  require(state.size() == weights.size(), "greedy_allocate: state and weight lengths differ");
  const Index n = state.size();
  const int cap = static_cast<int>(std::min<Index>(k_max, n));

  std::vector<Index> support;
  std::optional<PowerAllocation> best_alloc;
  double best_objective = 0.0;

  for (int round = 0; round < cap; ++round) {
    Index best_candidate = -1;
    double candidate_objective = 0.0;
    std::optional<PowerAllocation> candidate_alloc;
    for (Index l = 0; l < n; ++l) {
      if (std::binary_search(support.begin(), support.end(), l)) continue;
      std::vector<Index> trial = support;
      trial.insert(std::upper_bound(trial.begin(), trial.end(), l), l);
      PowerAllocation alloc = solve_support(state, weights, trial);
      const double objective = sc_objective_any(state, weights, alloc);
      if (best_candidate < 0 || objective > candidate_objective) {
        best_candidate = l;
        candidate_objective = objective;
        candidate_alloc = std::move(alloc);
      }
    }
    // The first round always schedules someone (the weighted time-sharing
    // choice); afterwards an addition must strictly improve the objective.
    if (round > 0 &&
        candidate_objective <= best_objective + kGreedyImprovementTol * std::abs(best_objective)) {
      break;
    }
    support.insert(std::upper_bound(support.begin(), support.end(), best_candidate),
                   best_candidate);
    best_objective = candidate_objective;
    best_alloc = std::move(candidate_alloc);
  }
  return make_result(state, weights, std::move(*best_alloc));
}

ConstrainedResult exhaustive_allocate(const ChannelState& state, const WeightVector& weights,
                                      int k_max) {
  require(k_max >= 1, "exhaustive_allocate: k_max must be positive");
  require(state.size() == weights.size(), "exhaustive_allocate: state and weight lengths differ");
  const Index n = state.size();
  const int cap = static_cast<int>(std::min<Index>(k_max, n));
  if (support_count(n, cap) > kEnumerationBudget) {
    throw budget_error("exhaustive_allocate: too many supports to enumerate");
  }

  std::optional<PowerAllocation> best_alloc;
  double best_objective = 0.0;
  std::vector<Index> support;
  for (int k = 1; k <= cap; ++k) {
    support.resize(k);
    for (int i = 0; i < k; ++i) support[i] = i;
    while (true) {
      PowerAllocation alloc = solve_support(state, weights, support);
      const double objective = sc_objective_any(state, weights, alloc);
      if (!best_alloc || objective > best_objective) {
        best_objective = objective;
        best_alloc = std::move(alloc);
      }
      // next k-combination in lexicographic order
      int i = k - 1;
      while (i >= 0 && support[i] == n - k + i) --i;
      if (i < 0) break;
      ++support[i];
      for (int t = i + 1; t < k; ++t) support[t] = support[t - 1] + 1;
    }
  }
  return make_result(state, weights, std::move(*best_alloc));
}

}  // namespace scsim
