// SPDX-License-Identifier: Apache-2.0

#include "scsim/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace scsim {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw contract_error(message);
}

void require_same_size(Index a, Index b) {
  require(a == b, "rates: state and allocation lengths differ");
}

std::vector<Index> stable_order_by_snr(const Vec& snr) {
  std::vector<Index> order(snr.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return snr[a] < snr[b]; });
  return order;
}

}  // namespace

double log2_1p(double x) { return std::log1p(x) * std::numbers::log2e; }

RateVector ts_rates(const ChannelState& state, const PowerAllocation& alloc) {
  require_same_size(state.size(), alloc.size());
  Vec r(state.size());
  for (Index l = 0; l < state.size(); ++l) {
    r[l] = alloc.p[l] * log2_1p(state.snr[l]);
  }
  return RateVector{std::move(r)};
}

RateVector sc_rates(const ChannelState& sorted_state, const PowerAllocation& alloc) {
  require_same_size(sorted_state.size(), alloc.size());
  require(sorted_state.sorted_ascending(), "sc_rates: state must be sorted ascending");
  const Index n = sorted_state.size();
  Vec r(n);
  double above = 0.0;  // combined power of better-SNR users
  for (Index l = n - 1; l >= 0; --l) {
    const double g = sorted_state.snr[l];
    r[l] = log2_1p(alloc.p[l] * g / (above * g + 1.0));
    above += alloc.p[l];
  }
  return RateVector{std::move(r)};
}

double remaining_power(const PowerAllocation& alloc, Index l) {
  require(l >= 0 && l < alloc.size(), "remaining_power: index out of range");
  double sum = 0.0;
  for (Index j = l + 1; j < alloc.size(); ++j) sum += alloc.p[j];
  return sum;
}

double weighted_objective(const ChannelState& state, const WeightVector& weights,
                          const PowerAllocation& alloc, RateModel model) {
  require_same_size(state.size(), weights.size());
  const RateVector rates =
      model == RateModel::kTimeSharing ? ts_rates(state, alloc) : sc_rates(state, alloc);
  return (weights.beta * rates.r).sum();
}

RateVector sc_rates_any(const ChannelState& state, const PowerAllocation& alloc) {
  require_same_size(state.size(), alloc.size());
  const auto order = stable_order_by_snr(state.snr);
  Vec r(state.size());
  double above = 0.0;
  for (Index i = state.size() - 1; i >= 0; --i) {
    const Index l = order[i];
    const double g = state.snr[l];
    r[l] = log2_1p(alloc.p[l] * g / (above * g + 1.0));
    above += alloc.p[l];
  }
  return RateVector{std::move(r)};
}

double sc_objective_any(const ChannelState& state, const WeightVector& weights,
                        const PowerAllocation& alloc) {
  require_same_size(state.size(), weights.size());
  return (weights.beta * sc_rates_any(state, alloc).r).sum();
}

double sc_objective_raw(const Eigen::Ref<const Vec>& snr_sorted,
                        const Eigen::Ref<const Vec>& beta, const Eigen::Ref<const Vec>& p) {
  double above = 0.0;
  double y = 0.0;
  for (Index l = snr_sorted.size() - 1; l >= 0; --l) {
    const double g = snr_sorted[l];
    y += beta[l] * log2_1p(p[l] * g / (above * g + 1.0));
    above += p[l];
  }
  return y;
}

}  // namespace scsim
