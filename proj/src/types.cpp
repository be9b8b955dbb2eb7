// SPDX-License-Identifier: Apache-2.0

#include "scsim/types.hpp"

#include <cmath>
#include <utility>

namespace scsim {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw contract_error(message);
}

}  // namespace

ChannelState::ChannelState(Vec values) : snr(std::move(values)) {
  require(snr.size() >= 1, "ChannelState: need at least one user");
  for (Index i = 0; i < snr.size(); ++i) {
    require(std::isfinite(snr[i]) && snr[i] >= 0.0,
            "ChannelState: SNR entries must be finite and non-negative");
  }
}

bool ChannelState::sorted_ascending() const {
  for (Index i = 1; i < snr.size(); ++i) {
    if (snr[i] < snr[i - 1]) return false;
  }
  return true;
}

WeightVector::WeightVector(Vec values) : beta(std::move(values)) {
  require(beta.size() >= 1, "WeightVector: need at least one user");
  for (Index i = 0; i < beta.size(); ++i) {
    require(std::isfinite(beta[i]) && beta[i] > 0.0,
            "WeightVector: weights must be finite and strictly positive");
  }
}

PowerAllocation::PowerAllocation(Vec fractions) : p(std::move(fractions)) {
  require(p.size() >= 1, "PowerAllocation: need at least one user");
  double sum = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    require(std::isfinite(p[i]) && p[i] >= 0.0,
            "PowerAllocation: fractions must be finite and non-negative");
    sum += p[i];
  }
  require(std::abs(sum - 1.0) <= kSimplexTol, "PowerAllocation: fractions must sum to one");
  for (Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) active.push_back(i);
  }
}

PowerAllocation PowerAllocation::vertex(Index position, Index size) {
  require(size >= 1 && position >= 0 && position < size, "PowerAllocation::vertex: position out of range");
  Vec p = Vec::Zero(size);
  p[position] = 1.0;
  return PowerAllocation(std::move(p));
}

}  // namespace scsim
