// SPDX-License-Identifier: Apache-2.0
//
// Core value types shared by the allocators, the schedulers, and the
// simulation harness: per-block channel state, utility weights, power
// fractions on the simplex, and per-user rates.

#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace scsim {

using Vec = Eigen::ArrayXd;
using Index = Eigen::Index;

// Centralized numeric tolerances.
inline constexpr double kSimplexTol = 1e-12;  // power fractions must sum to one within this
inline constexpr double kCompareTol = 1e-9;   // generic objective/rate comparisons

// Violated precondition or broken internal invariant.
class contract_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Requested crossing point does not exist (equal weights).
class no_crossing_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Enumeration or grid size exceeds the configured budget.
class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid scenario or policy configuration.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem failure while emitting reports.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Instantaneous per-user SNR of one fading block, linear power ratio.
struct ChannelState {
  Vec snr;

  explicit ChannelState(Vec values);
  Index size() const { return snr.size(); }
  bool sorted_ascending() const;
};

/// Per-user utility derivatives weighting the instantaneous rates.
/// Entries are strictly positive and finite.
struct WeightVector {
  Vec beta;

  explicit WeightVector(Vec values);
  Index size() const { return beta.size(); }
};

/// Fractions of the transmit power (or of the block time) on the probability
/// simplex: non-negative entries summing to one within kSimplexTol.
struct PowerAllocation {
  Vec p;
  std::vector<Index> active;  // indices with p > 0, ascending

  explicit PowerAllocation(Vec fractions);
  static PowerAllocation vertex(Index position, Index size);
  Index size() const { return p.size(); }
};

/// Per-user rates in bits per channel use.
struct RateVector {
  Vec r;

  Index size() const { return r.size(); }
};

}  // namespace scsim
