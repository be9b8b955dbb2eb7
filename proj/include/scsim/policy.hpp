// SPDX-License-Identifier: Apache-2.0
//
// Per-block scheduling policies. Vertex policies (round robin, max rate,
// weighted time sharing) hand the whole block to one user; the superposition
// policies split the power via the closed-form allocator, optionally capped
// to a maximum number of scheduled users.

#pragma once

#include "scsim/channel.hpp"
#include "scsim/constrained.hpp"
#include "scsim/tracker.hpp"

#include <cstdint>

namespace scsim {

enum class PolicyKind {
  kRoundRobin,
  kMaxRate,
  kPfTimeSharing,
  kSuperposition,
  kSuperpositionCapped,
};

struct PolicySpec {
  PolicyKind kind = PolicyKind::kRoundRobin;
  Utility utility = Utility::kProportionalFair;  // used by PF-TS and the SC policies
  int k_max = 0;                                 // kSuperpositionCapped only
  bool greedy = true;                            // kSuperpositionCapped: greedy vs exhaustive
};

struct BlockDecision {
  PowerAllocation alloc;
  RateVector rates;  // realized rates under the policy's rate model
};

/// Decides one block. `tracker` still holds the previous block's averages;
/// the caller updates it with the returned rates afterwards. `block_index`
/// drives the round-robin rotation (user = block_index mod L).
BlockDecision schedule_block(const PolicySpec& policy, const ChannelState& state,
                             const ThroughputTracker& tracker, long long block_index);

/// Runs the block loop for n_blocks and returns the empirical mean rate per
/// user, discarding the first `window` blocks as warm-up.
/// Requires n_blocks >= 10 * window.
Vec steady_state_throughput(const PolicySpec& policy, const std::vector<FadingSpec>& users,
                            int window, long long n_blocks, std::uint64_t seed);

}  // namespace scsim
