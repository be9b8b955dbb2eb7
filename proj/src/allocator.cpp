// SPDX-License-Identifier: Apache-2.0

#include "scsim/allocator.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace scsim {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw contract_error(message);
}

double crossing_raw(const Vec& snr, const Vec& beta, Index j, Index k) {
  const double gj = snr[j], gk = snr[k];
  const double zj = gj * beta[j], zk = gk * beta[k];
  const double denom = gj * zk - gk * zj;  // = gj * gk * (beta_k - beta_j)
  if (denom == 0.0) {
    throw no_crossing_error("crossing_point: marginal rates never cross (equal weights)");
  }
  return (zj - zk) / denom;
}

}  // namespace

AllocationProblem::AllocationProblem(const ChannelState& state, const WeightVector& weights) {
  require(state.size() == weights.size(), "AllocationProblem: state and weight lengths differ");
  perm.resize(state.size());
  std::iota(perm.begin(), perm.end(), Index{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&](Index a, Index b) { return state.snr[a] < state.snr[b]; });
  snr.resize(state.size());
  beta.resize(state.size());
  for (Index i = 0; i < state.size(); ++i) {
    snr[i] = state.snr[perm[i]];
    beta[i] = weights.beta[perm[i]];
  }
}

WeightedMarginals weighted_marginals(const AllocationProblem& problem) {
  Vec zero = problem.snr * problem.beta;
  Vec full = zero / (1.0 + problem.snr);
  return {std::move(zero), std::move(full)};
}

double crossing_point(const AllocationProblem& problem, Index j, Index k) {
  require(k >= 0 && k < j && j < problem.size(), "crossing_point: need sorted positions j > k");
  return crossing_raw(problem.snr, problem.beta, j, k);
}

std::vector<Index> purge_weight_dominated(const AllocationProblem& problem,
                                          PurgeDiagnostics* diag) {
  const Index n = problem.size();
  const WeightedMarginals m = weighted_marginals(problem);
  std::vector<Index> kept;
  kept.reserve(n);
  kept.push_back(n - 1);
  Index j = n - 1;
  for (Index k = n - 2; k >= 0; --k) {
    if (diag) ++diag->comparisons;
    if (problem.beta[k] > problem.beta[j] && m.full[k] > m.full[j]) {
      kept.push_back(k);
      j = k;
    }
  }
  std::reverse(kept.begin(), kept.end());
  return kept;
}

std::vector<Index> purge_marginal_dominated(const AllocationProblem& problem,
                                            const std::vector<Index>& active,
                                            PurgeDiagnostics* diag) {
  require(!active.empty(), "purge_marginal_dominated: empty active set");
  const Vec zero = problem.snr * problem.beta;
  std::vector<Index> kept;
  kept.reserve(active.size());
  kept.push_back(active.front());
  for (std::size_t t = 1; t < active.size(); ++t) {
    if (diag) ++diag->comparisons;
    if (zero[kept.back()] < zero[active[t]]) kept.push_back(active[t]);
  }
  return kept;
}

std::vector<Index> purge_crossing_order(const AllocationProblem& problem,
                                        const std::vector<Index>& active,
                                        PurgeDiagnostics* diag) {
  if (active.size() <= 2) return active;
  std::vector<Index> kept;
  kept.reserve(active.size());
  auto crossing = [&](Index j, Index k) {
    if (diag) ++diag->crossing_evaluations;
    return crossing_raw(problem.snr, problem.beta, j, k);
  };
  for (const Index candidate : active) {
    while (kept.size() >= 2) {
      if (diag) ++diag->comparisons;
      const double inner = crossing(kept.back(), kept[kept.size() - 2]);
      const double outer = crossing(candidate, kept.back());
      if (outer < inner) break;
      kept.pop_back();  // middle user provably gets zero power
    }
    kept.push_back(candidate);
  }
  return kept;
}

PowerAllocation assign_powers(const AllocationProblem& problem, const std::vector<Index>& active,
                              PurgeDiagnostics* diag) {
  require(!active.empty(), "assign_powers: empty active set");
  require(std::is_sorted(active.begin(), active.end()) && active.front() >= 0 &&
              active.back() < problem.size(),
          "assign_powers: active set must be ascending sorted positions");
  Vec p = Vec::Zero(problem.size());
  const std::size_t count = active.size();
  if (count == 1) {
    p[active[0]] = 1.0;
    if (diag) diag->crossings.clear();
    return PowerAllocation(std::move(p));
  }
  std::vector<double> crossings(count - 1);
  for (std::size_t i = 0; i + 1 < count; ++i) {
    if (diag) ++diag->crossing_evaluations;
    crossings[i] = crossing_raw(problem.snr, problem.beta, active[i + 1], active[i]);
  }
  for (std::size_t i = 0; i + 1 < count; ++i) {
    require(crossings[i] > 0.0 && crossings[i] < 1.0, "assign_powers: crossing outside (0, 1)");
    if (i > 0) {
      require(crossings[i] < crossings[i - 1], "assign_powers: crossings not strictly decreasing");
    }
  }
  p[active[count - 1]] = crossings[count - 2];
  for (std::size_t i = 1; i + 1 < count; ++i) {
    p[active[i]] = crossings[i - 1] - crossings[i];
  }
  p[active[0]] = 1.0 - crossings[0];
  if (diag) diag->crossings = std::move(crossings);
  return PowerAllocation(std::move(p));
}

PowerAllocation allocate(const ChannelState& state, const WeightVector& weights,
                         PurgeDiagnostics* diag) {
  const AllocationProblem problem(state, weights);
  if (diag) {
    WeightedMarginals m = weighted_marginals(problem);
    diag->marginal_zero = std::move(m.zero);
    diag->marginal_full = std::move(m.full);
  }
  const auto stage1 = purge_weight_dominated(problem, diag);
  if (diag) diag->after_weight_purge = stage1;
  const auto stage2 = purge_marginal_dominated(problem, stage1, diag);
  if (diag) diag->after_marginal_purge = stage2;
  const auto stage3 = purge_crossing_order(problem, stage2, diag);
  if (diag) diag->after_crossing_purge = stage3;
  const PowerAllocation sorted_alloc = assign_powers(problem, stage3, diag);
  Vec p(problem.size());
  for (Index i = 0; i < problem.size(); ++i) {
    p[problem.perm[i]] = sorted_alloc.p[i];
  }
  return PowerAllocation(std::move(p));
}

PowerAllocation allocate_two_user(const ChannelState& state, const WeightVector& weights) {
  require(state.size() == 2 && weights.size() == 2, "allocate_two_user: exactly two users required");
  const bool swapped = state.snr[1] < state.snr[0];
  const Index weak = swapped ? 1 : 0;
  const Index strong = swapped ? 0 : 1;
  const double g1 = state.snr[weak], g2 = state.snr[strong];
  const double b1 = weights.beta[weak], b2 = weights.beta[strong];
  const double z1 = g1 * b1, z2 = g2 * b2;
  const double t1 = z1 / (1.0 + g1), t2 = z2 / (1.0 + g2);

  double p_strong;
  if (b1 <= b2 || t1 <= t2) {
    p_strong = 1.0;
  } else if (z1 >= z2) {
    p_strong = 0.0;
  } else {
    p_strong = (z2 - z1) / (g1 * g2 * (b1 - b2));
  }
  Vec p(2);
  p[strong] = p_strong;
  p[weak] = 1.0 - p_strong;
  return PowerAllocation(std::move(p));
}

}  // namespace scsim
