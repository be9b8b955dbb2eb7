// SPDX-License-Identifier: Apache-2.0
//
// Power allocation with a cap on the number of simultaneously scheduled
// users: a greedy one-user-at-a-time heuristic and an exhaustive optimum
// over all supports (exponential in the cap, guarded by a budget).

#pragma once

#include "scsim/allocator.hpp"

namespace scsim {

/// Result of a capped allocation. `active` lists the users with strictly
/// positive power (ascending, original indexing); `objective` equals the
/// weighted superposition objective of `alloc`.
struct ConstrainedResult {
  std::vector<Index> active;
  PowerAllocation alloc;
  double objective;
};

/// Relative improvement a new user must bring for the greedy search to keep
/// going.
inline constexpr double kGreedyImprovementTol = 1e-12;

/// Supports larger than this are rejected by exhaustive_allocate.
inline constexpr double kEnumerationBudget = 1e6;

/// Adds users one at a time, each round picking the user whose inclusion
/// maximizes the restricted optimum (ties go to the smallest index). The
/// first round always schedules the best single user, which is exactly the
/// weighted time-sharing choice; later rounds stop when no candidate
/// improves the objective by more than kGreedyImprovementTol (relative) or
/// when k_max users are scheduled.
ConstrainedResult greedy_allocate(const ChannelState& state, const WeightVector& weights,
                                  int k_max);

/// Solves the restricted problem for every support of size <= k_max and
/// returns the best. Throws budget_error when the enumeration would exceed
/// kEnumerationBudget supports.
ConstrainedResult exhaustive_allocate(const ChannelState& state, const WeightVector& weights,
                                      int k_max);

}  // namespace scsim
