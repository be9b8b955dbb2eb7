// SPDX-License-Identifier: Apache-2.0
//
// Block-fading SNR generation. SNRs are i.i.d. across users and blocks,
// exponentially distributed (Rayleigh-power fading) with a per-user mean.

#pragma once

#include "scsim/rng.hpp"
#include "scsim/types.hpp"

#include <cstdint>
#include <vector>

namespace scsim {

/// Fading law of one downlink. `deterministic` freezes the draw at the mean
/// (variance zero), for unit tests.
struct FadingSpec {
  double mean_snr = 1.0;  // linear scale
  bool deterministic = false;
};

/// Draws one block of per-user SNRs. Each user owns a substream seeded with
/// substream_seed(seed, user_index), so sequences are reproducible and
/// independent of how many blocks other users consumed.
class BlockFadingChannel {
 public:
  BlockFadingChannel(std::vector<FadingSpec> users, std::uint64_t seed);

  ChannelState sample_block();
  Index size() const { return static_cast<Index>(users_.size()); }

 private:
  std::vector<FadingSpec> users_;
  std::vector<std::mt19937_64> streams_;
};

}  // namespace scsim
