// SPDX-License-Identifier: Apache-2.0

#include "scsim/tracker.hpp"

namespace scsim {

ThroughputTracker::ThroughputTracker(Index n_users, int window, double floor)
    : window_(window),
      floor_(floor),
      history_(Eigen::ArrayXXd::Zero(n_users, window > 0 ? window : 1)),
      sum_(Vec::Zero(n_users)),
      average_(Vec::Constant(n_users, floor)) {
  if (n_users < 1) throw contract_error("ThroughputTracker: need at least one user");
  if (window < 1) throw contract_error("ThroughputTracker: window must be positive");
  if (!(floor > 0.0)) throw contract_error("ThroughputTracker: floor must be positive");
}

void ThroughputTracker::update(const RateVector& rates) {
  if (rates.size() != sum_.size()) throw contract_error("ThroughputTracker: rate length mismatch");
  sum_ += rates.r - history_.col(cursor_);
  history_.col(cursor_) = rates.r;
  cursor_ = (cursor_ + 1) % window_;
  ++count_;
  average_ = (sum_ / static_cast<double>(window_)).max(floor_);
}

WeightVector weights_from_utility(Utility utility, const ThroughputTracker& tracker) {
  switch (utility) {
    case Utility::kProportionalFair:
      return WeightVector(tracker.average().inverse());
    case Utility::kSumRate:
      return WeightVector(Vec::Ones(tracker.size()));
  }
  throw contract_error("weights_from_utility: unknown utility");
}

}  // namespace scsim
