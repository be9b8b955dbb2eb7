// SPDX-License-Identifier: Apache-2.0
//
// Brute-force maximizers of the weighted superposition objective, used only
// to validate the closed-form allocator. Both are independent of the
// allocator's purge/crossing machinery.

#pragma once

#include "scsim/rates.hpp"

namespace scsim {

struct OracleSolution {
  PowerAllocation alloc;
  double objective;
  double resolution;  // grid step used
};

/// Maximizes the objective in cumulative-power coordinates
/// Q_i = sum_{j>=i} p_j, under which it separates into one term per Q_i on
/// the ordered chain 1 >= Q_1 >= ... >= Q_{L-1} >= 0. A dynamic program over
/// the discretized chain finds the grid optimum; coordinate-wise
/// golden-section refinement then tightens it. The separable rewrite is
/// re-verified numerically against sc_rates on random points (1e-12
/// agreement) every call before being trusted.
///
/// The state must be sorted ascending; the returned allocation uses the same
/// index space. Resolution must lie in (0, 0.1].
OracleSolution cumulative_dp_maximize(const ChannelState& sorted_state,
                                      const WeightVector& weights, double resolution);

/// Exhaustive grid search over the simplex, limited to L <= 3 (throws
/// budget_error above that). Accepts any user order. A short coordinate
/// refinement sharpens the grid optimum.
OracleSolution simplex_grid_maximize(const ChannelState& state, const WeightVector& weights,
                                     double resolution);

}  // namespace scsim
