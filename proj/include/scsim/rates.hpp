// SPDX-License-Identifier: Apache-2.0
//
// Rate models for one transmission block. Two multi-user schemes are
// supported: plain time sharing, and superposed transmission decoded with
// successive interference cancellation. All rates are in bits per channel
// use (base-2 logarithms).

#pragma once

#include "scsim/types.hpp"

namespace scsim {

enum class RateModel { kTimeSharing, kSuperposition };

/// log2(1 + x), accurate for small x.
double log2_1p(double x);

/// Time-sharing rates: r_l = p_l * log2(1 + g_l).
RateVector ts_rates(const ChannelState& state, const PowerAllocation& alloc);

/// Superposition rates under successive cancellation. Users must be sorted
/// by ascending SNR; the combined power of the users above l acts as
/// residual interference on l:
///   r_l = log2(1 + p_l g_l / (pbar_l g_l + 1)),  pbar_l = sum_{j>l} p_j.
RateVector sc_rates(const ChannelState& sorted_state, const PowerAllocation& alloc);

/// Sum of fractions strictly above position l; zero for the last user.
double remaining_power(const PowerAllocation& alloc, Index l);

/// sum_l beta_l r_l under the chosen rate model. The superposition model
/// requires the state sorted ascending, as in sc_rates.
double weighted_objective(const ChannelState& state, const WeightVector& weights,
                          const PowerAllocation& alloc, RateModel model);

/// As sc_rates but accepts any user order: stable-sorts by SNR internally
/// and reports rates in the caller's order.
RateVector sc_rates_any(const ChannelState& state, const PowerAllocation& alloc);

/// Weighted superposition objective for an arbitrarily ordered state.
double sc_objective_any(const ChannelState& state, const WeightVector& weights,
                        const PowerAllocation& alloc);

/// Unchecked superposition objective on raw arrays sorted by ascending SNR.
/// Performs no simplex or sign validation, so it stays evaluable slightly
/// off the simplex; used by derivative probes and the brute-force oracle.
double sc_objective_raw(const Eigen::Ref<const Vec>& snr_sorted,
                        const Eigen::Ref<const Vec>& beta,
                        const Eigen::Ref<const Vec>& p);

}  // namespace scsim
