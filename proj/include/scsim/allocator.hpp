// SPDX-License-Identifier: Apache-2.0
//
// Closed-form power allocation for superposed transmission under a weighted
// sum-rate objective. The solver sorts users by SNR, removes users that
// provably receive zero power in three sweeps, and assigns the remaining
// powers from adjacent crossing points of the weighted marginal rates.

#pragma once

#include "scsim/rates.hpp"

#include <cstddef>
#include <vector>

namespace scsim {

/// One allocation instance normalized to ascending SNR order. Ties keep the
/// caller's relative order (stable sort).
struct AllocationProblem {
  Vec snr;                  // ascending
  Vec beta;                 // permuted alongside snr
  std::vector<Index> perm;  // perm[sorted_pos] = original user index

  AllocationProblem(const ChannelState& state, const WeightVector& weights);
  Index size() const { return snr.size(); }
};

/// Weighted marginal rate of user l as a function of the residual power q
/// stacked above it, d/dq [beta_l ln(1 + g_l q)] = beta_l g_l / (1 + g_l q):
///   zero: slope at q = 0, i.e. beta_l * g_l
///   full: slope at q = 1, i.e. beta_l * g_l / (1 + g_l)
struct WeightedMarginals {
  Vec zero;
  Vec full;
};

WeightedMarginals weighted_marginals(const AllocationProblem& problem);

/// Stage-by-stage view of one allocation, exposed for tests and the CLI's
/// verbose mode. Indices refer to sorted positions.
struct PurgeDiagnostics {
  Vec marginal_zero;
  Vec marginal_full;
  std::vector<Index> after_weight_purge;
  std::vector<Index> after_marginal_purge;
  std::vector<Index> after_crossing_purge;  // final active set
  std::vector<double> crossings;            // adjacent crossings of the final set, strictly decreasing
  std::size_t comparisons = 0;
  std::size_t crossing_evaluations = 0;
};

/// Residual power level where users at sorted positions j and k (j > k)
/// have equal weighted marginal rate:
///   p_{j,k} = (z_j - z_k) / (g_j z_k - g_k z_j),  z = weighted_marginals().zero.
/// Throws no_crossing_error when the denominator vanishes (equal weights);
/// the purge sweeps guarantee callers never hit that case.
double crossing_point(const AllocationProblem& problem, Index j, Index k);

/// Right-to-left sweep keeping a user only when both its weight and its
/// full-interference marginal strictly exceed those of the nearest kept
/// user above it. Survivors have strictly decreasing weight and full
/// marginal along increasing SNR.
std::vector<Index> purge_weight_dominated(const AllocationProblem& problem,
                                          PurgeDiagnostics* diag = nullptr);

/// Left-to-right sweep keeping a user only when its zero-interference
/// marginal strictly exceeds the last kept one. Survivors have strictly
/// increasing zero marginal.
std::vector<Index> purge_marginal_dominated(const AllocationProblem& problem,
                                            const std::vector<Index>& active,
                                            PurgeDiagnostics* diag = nullptr);

/// Removes middle users whose adjacent crossing points are out of order,
/// re-examining earlier survivors after each removal (monotone stack run to
/// a fixpoint). The result has strictly decreasing adjacent crossings.
std::vector<Index> purge_crossing_order(const AllocationProblem& problem,
                                        const std::vector<Index>& active,
                                        PurgeDiagnostics* diag = nullptr);

/// Turns a final active set into power fractions (sorted index space).
/// With actives l_1 < ... < l_K and adjacent crossings c_i = p_{l_{i+1},l_i}:
///   p_{l_K} = c_{K-1},  p_{l_i} = c_{i-1} - c_i,  p_{l_1} = 1 - c_1.
/// All active users receive strictly positive power; everyone else exactly 0.
PowerAllocation assign_powers(const AllocationProblem& problem,
                              const std::vector<Index>& active,
                              PurgeDiagnostics* diag = nullptr);

/// Full pipeline: sort, purge three times, assign, map back to the caller's
/// original user order. Maximizes the weighted superposition objective over
/// the simplex.
PowerAllocation allocate(const ChannelState& state, const WeightVector& weights,
                         PurgeDiagnostics* diag = nullptr);

/// Closed form for exactly two users; agrees with allocate() on every input.
PowerAllocation allocate_two_user(const ChannelState& state, const WeightVector& weights);

}  // namespace scsim
