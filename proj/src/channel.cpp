// SPDX-License-Identifier: Apache-2.0

#include "scsim/channel.hpp"

#include <cmath>
#include <utility>

namespace scsim {

BlockFadingChannel::BlockFadingChannel(std::vector<FadingSpec> users, std::uint64_t seed)
    : users_(std::move(users)) {
  if (users_.empty()) throw contract_error("BlockFadingChannel: need at least one user");
  for (const FadingSpec& user : users_) {
    if (!(user.mean_snr > 0.0) || !std::isfinite(user.mean_snr)) {
      throw contract_error("BlockFadingChannel: mean SNR must be positive and finite");
    }
  }
  streams_.reserve(users_.size());
  for (std::size_t l = 0; l < users_.size(); ++l) {
    streams_.emplace_back(substream_seed(seed, static_cast<std::uint64_t>(l)));
  }
}

ChannelState BlockFadingChannel::sample_block() {
  Vec snr(size());
  for (std::size_t l = 0; l < users_.size(); ++l) {
    snr[static_cast<Index>(l)] = users_[l].deterministic
                                     ? users_[l].mean_snr
                                     : exponential_sample(streams_[l], users_[l].mean_snr);
  }
  return ChannelState(std::move(snr));
}

}  // namespace scsim
