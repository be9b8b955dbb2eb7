// SPDX-License-Identifier: Apache-2.0

#include "scsim/policy.hpp"

namespace scsim {

namespace {

Index argmax_smallest(const Vec& values) {
  Index best = 0;
  for (Index l = 1; l < values.size(); ++l) {
    if (values[l] > values[best]) best = l;
  }
  return best;
}

BlockDecision vertex_decision(const ChannelState& state, Index user) {
  PowerAllocation alloc = PowerAllocation::vertex(user, state.size());
  RateVector rates = ts_rates(state, alloc);  // equals sc_rates at a vertex
  return {std::move(alloc), std::move(rates)};
}

}  // namespace

BlockDecision schedule_block(const PolicySpec& policy, const ChannelState& state,
                             const ThroughputTracker& tracker, long long block_index) {
  if (tracker.size() != state.size()) {
    throw contract_error("schedule_block: tracker and state lengths differ");
  }
  switch (policy.kind) {
    case PolicyKind::kRoundRobin: {
      const Index user = static_cast<Index>(block_index % static_cast<long long>(state.size()));
      return vertex_decision(state, user);
    }
    case PolicyKind::kMaxRate:
      return vertex_decision(state, argmax_smallest(state.snr));
    case PolicyKind::kPfTimeSharing: {
      const WeightVector weights = weights_from_utility(policy.utility, tracker);
      Vec score(state.size());
      for (Index l = 0; l < state.size(); ++l) {
        score[l] = weights.beta[l] * log2_1p(state.snr[l]);
      }
      return vertex_decision(state, argmax_smallest(score));
    }
    case PolicyKind::kSuperposition: {
      const WeightVector weights = weights_from_utility(policy.utility, tracker);
      PowerAllocation alloc = allocate(state, weights);
      RateVector rates = sc_rates_any(state, alloc);
      return {std::move(alloc), std::move(rates)};
    }
    case PolicyKind::kSuperpositionCapped: {
      const WeightVector weights = weights_from_utility(policy.utility, tracker);
      ConstrainedResult result = policy.greedy ? greedy_allocate(state, weights, policy.k_max)
                                               : exhaustive_allocate(state, weights, policy.k_max);
      RateVector rates = sc_rates_any(state, result.alloc);
      return {std::move(result.alloc), std::move(rates)};
    }
  }
  throw contract_error("schedule_block: unknown policy kind");
}

Vec steady_state_throughput(const PolicySpec& policy, const std::vector<FadingSpec>& users,
                            int window, long long n_blocks, std::uint64_t seed) {
  if (n_blocks < 10LL * window) {
    throw contract_error("steady_state_throughput: n_blocks must be at least 10 * window");
  }
  BlockFadingChannel channel(users, seed);
  ThroughputTracker tracker(channel.size(), window);
  Vec total = Vec::Zero(channel.size());
  for (long long n = 0; n < n_blocks; ++n) {
    const ChannelState state = channel.sample_block();
    BlockDecision decision = schedule_block(policy, state, tracker, n);
    if (n >= window) total += decision.rates.r;
    tracker.update(decision.rates);
  }
  return total / static_cast<double>(n_blocks - window);
}

}  // namespace scsim
