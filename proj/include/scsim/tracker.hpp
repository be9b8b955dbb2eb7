// SPDX-License-Identifier: Apache-2.0
//
// Sliding-window throughput averages and the utility-derivative weights
// they induce.

#pragma once

#include "scsim/types.hpp"

namespace scsim {

/// Lower clamp on the tracked averages. Keeps proportional-fair weights
/// finite at cold start; the warm-up discard removes the transient from all
/// reported metrics.
inline constexpr double kRateFloor = 1e-3;

/// Exact sliding mean of the last `window` per-user rates, clamped below at
/// `floor`. Backed by a fixed-length circular history; slots not yet written
/// count as zero rate.
class ThroughputTracker {
 public:
  ThroughputTracker(Index n_users, int window, double floor = kRateFloor);

  /// Pushes one block of realized rates.
  void update(const RateVector& rates);

  /// Current clamped averages, one entry per user.
  const Vec& average() const { return average_; }

  Index size() const { return sum_.size(); }
  int window() const { return window_; }
  long long updates() const { return count_; }

 private:
  int window_;
  double floor_;
  Eigen::ArrayXXd history_;  // users x window, circular
  Index cursor_ = 0;
  long long count_ = 0;
  Vec sum_;
  Vec average_;
};

enum class Utility { kProportionalFair, kSumRate };

/// Weights for the current block from the previous block's averages:
/// proportional fair uses beta_l = 1 / avg_l, sum rate uses beta_l = 1.
WeightVector weights_from_utility(Utility utility, const ThroughputTracker& tracker);

}  // namespace scsim
