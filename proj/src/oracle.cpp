// SPDX-License-Identifier: Apache-2.0

#include "scsim/oracle.hpp"

#include "scsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace scsim {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw contract_error(message);
}

constexpr double kGolden = 0.6180339887498949;  // (sqrt(5) - 1) / 2
constexpr double kIdentityTol = 1e-12;

// Contribution of the cumulative coordinate q = Q_i (power stacked on users
// i and above) to the objective, for 1 <= i <= L-1:
//   h_i(q) = beta_i log2(1 + g_i q) - beta_{i-1} log2(1 + g_{i-1} q).
double chain_term(const Vec& snr, const Vec& beta, Index i, double q) {
  return beta[i] * log2_1p(snr[i] * q) - beta[i - 1] * log2_1p(snr[i - 1] * q);
}

// Objective in cumulative coordinates; Q has L + 1 entries with Q_0 = 1 and
// Q_L = 0 as sentinels.
double chain_objective(const Vec& snr, const Vec& beta, const std::vector<double>& q) {
  double y = beta[0] * log2_1p(snr[0] * q[0]);
  for (Index i = 1; i < snr.size(); ++i) y += chain_term(snr, beta, i, q[i]);
  return y;
}

// The separable rewrite is only trusted after matching the direct rate-sum
// route on a handful of pseudo-random points.
void check_chain_identity(const Vec& snr, const Vec& beta) {
  const Index n = snr.size();
  std::mt19937_64 engine(0x0c0ffee0u);
  for (int rep = 0; rep < 4; ++rep) {
    Vec p(n);
    double total = 0.0;
    for (Index l = 0; l < n; ++l) {
      p[l] = -std::log1p(-uniform_unit(engine));
      total += p[l];
    }
    p /= total;
    std::vector<double> q(n + 1);
    q[n] = 0.0;
    for (Index i = n - 1; i >= 0; --i) q[i] = q[i + 1] + p[i];
    const double direct = sc_objective_raw(snr, beta, p);
    const double chained = chain_objective(snr, beta, q);
    require(std::abs(direct - chained) <= kIdentityTol * std::max(1.0, std::abs(direct)),
            "cumulative_dp_maximize: separable rewrite disagrees with the rate model");
  }
}

// Golden-section maximization on [lo, hi], robust to monotone or
// valley-shaped functions by tracking the best probe, both endpoints, and an
// optional seed point (the caller's current iterate, so sweeps never regress).
template <typename F>
double golden_max(F&& f, double lo, double hi, double xtol, double seed) {
  double best_x = lo;
  double best_v = f(lo);
  const double at_hi = f(hi);
  if (at_hi > best_v) {
    best_x = hi;
    best_v = at_hi;
  }
  if (seed > lo && seed < hi) {
    const double at_seed = f(seed);
    if (at_seed > best_v) {
      best_x = seed;
      best_v = at_seed;
    }
  }
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    }
    if (f1 > best_v) {
      best_v = f1;
      best_x = x1;
    }
    if (f2 > best_v) {
      best_v = f2;
      best_x = x2;
    }
  }
  return best_x;
}

PowerAllocation allocation_from_chain(const std::vector<double>& q, Index n) {
  Vec p(n);
  for (Index i = 0; i < n; ++i) p[i] = q[i] - q[i + 1];
  return PowerAllocation(std::move(p));
}

}  // namespace

OracleSolution cumulative_dp_maximize(const ChannelState& sorted_state,
                                      const WeightVector& weights, double resolution) {
  require(resolution > 0.0 && resolution <= 0.1, "cumulative_dp_maximize: resolution must be in (0, 0.1]");
  require(sorted_state.size() == weights.size(), "cumulative_dp_maximize: length mismatch");
  require(sorted_state.sorted_ascending(), "cumulative_dp_maximize: state must be sorted ascending");
  const Vec& snr = sorted_state.snr;
  const Vec& beta = weights.beta;
  const Index n = sorted_state.size();

  if (n == 1) {
    PowerAllocation alloc = PowerAllocation::vertex(0, 1);
    const double objective =
        weighted_objective(sorted_state, weights, alloc, RateModel::kSuperposition);
    return {std::move(alloc), objective, resolution};
  }

  check_chain_identity(snr, beta);

  const int steps = std::max(1, static_cast<int>(std::llround(1.0 / resolution)));
  auto grid = [&](int t) { return static_cast<double>(t) / steps; };

  // best[t] after processing coordinate i holds
  //   max over Q_i <= grid(t) of sum_{j >= i} h_j(Q_j) subject to the chain,
  // built right to left with a running prefix maximum.
  std::vector<std::vector<int>> choice(n, std::vector<int>(steps + 1, 0));
  std::vector<double> best(steps + 1, 0.0);
  std::vector<double> current(steps + 1, 0.0);
  for (Index i = n - 1; i >= 1; --i) {
    double run = -std::numeric_limits<double>::infinity();
    int run_t = 0;
    for (int t = 0; t <= steps; ++t) {
      const double value = chain_term(snr, beta, i, grid(t)) + best[t];
      if (value > run) {
        run = value;
        run_t = t;
      }
      current[t] = run;
      choice[i][t] = run_t;
    }
    best.swap(current);
  }

  std::vector<double> q(n + 1);
  q[0] = 1.0;
  q[n] = 0.0;
  int cursor = steps;
  for (Index i = 1; i < n; ++i) {
    cursor = choice[i][cursor];
    q[i] = grid(cursor);
  }

  // Refinement between the (fixed) neighbors, iterated to a fixpoint of the
  // objective. Two passes per sweep: single coordinates, then maximal runs
  // of equal coordinates moved jointly. The joint pass frees a run of
  // zero-power users pinned between two active ones, where no single
  // coordinate move can improve the sum.
  double previous = -std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < 50; ++sweep) {
    for (Index i = 1; i < n; ++i) {
      const double lo = q[i + 1], hi = q[i - 1];
      if (hi - lo <= 1e-12) {
        q[i] = lo;
        continue;
      }
      q[i] =
          golden_max([&](double x) { return chain_term(snr, beta, i, x); }, lo, hi, 1e-10, q[i]);
    }
    for (Index a = 1; a < n;) {
      Index b = a;
      while (b + 1 < n && q[b + 1] == q[a]) ++b;
      if (b > a) {
        const double lo = q[b + 1], hi = q[a - 1];
        if (hi - lo > 1e-12) {
          auto block_term = [&](double x) {
            double sum = 0.0;
            for (Index i = a; i <= b; ++i) sum += chain_term(snr, beta, i, x);
            return sum;
          };
          const double best = golden_max(block_term, lo, hi, 1e-10, q[a]);
          for (Index i = a; i <= b; ++i) q[i] = best;
        }
      }
      a = b + 1;
    }
    const double objective = chain_objective(snr, beta, q);
    if (objective - previous <= 1e-13 * std::max(1.0, std::abs(objective))) break;
    previous = objective;
  }

  PowerAllocation alloc = allocation_from_chain(q, n);
  const double objective =
      weighted_objective(sorted_state, weights, alloc, RateModel::kSuperposition);
  return {std::move(alloc), objective, resolution};
}

OracleSolution simplex_grid_maximize(const ChannelState& state, const WeightVector& weights,
                                     double resolution) {
  require(resolution > 0.0 && resolution <= 0.1, "simplex_grid_maximize: resolution must be in (0, 0.1]");
  require(state.size() == weights.size(), "simplex_grid_maximize: length mismatch");
  const Index n = state.size();
  if (n > 3) throw budget_error("simplex_grid_maximize: limited to three users");

  // Work in sorted space; map back at the end.
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return state.snr[a] < state.snr[b]; });
  Vec snr(n), beta(n);
  for (Index i = 0; i < n; ++i) {
    snr[i] = state.snr[order[i]];
    beta[i] = weights.beta[order[i]];
  }
  const int steps = std::max(1, static_cast<int>(std::llround(1.0 / resolution)));

  Vec best_p = Vec::Zero(n);
  double best_value = -std::numeric_limits<double>::infinity();
  Vec p = Vec::Zero(n);

  if (n == 1) {
    best_p[0] = 1.0;
    best_value = sc_objective_raw(snr, beta, best_p);
  } else if (n == 2) {
    for (int t = 0; t <= steps; ++t) {
      p[1] = static_cast<double>(t) / steps;
      p[0] = 1.0 - p[1];
      const double value = sc_objective_raw(snr, beta, p);
      if (value > best_value) {
        best_value = value;
        best_p = p;
      }
    }
    const double center = best_p[1];
    const double width = 1.0 / steps;
    const double refined = golden_max(
        [&](double x) {
          p[1] = x;
          p[0] = 1.0 - x;
          return sc_objective_raw(snr, beta, p);
        },
        std::max(0.0, center - width), std::min(1.0, center + width), 1e-10, center);
    p[1] = refined;
    p[0] = 1.0 - refined;
    if (sc_objective_raw(snr, beta, p) > best_value) best_p = p;
  } else {
    for (int t3 = 0; t3 <= steps; ++t3) {
      for (int t2 = 0; t2 + t3 <= steps; ++t2) {
        p[2] = static_cast<double>(t3) / steps;
        p[1] = static_cast<double>(t2) / steps;
        p[0] = static_cast<double>(steps - t2 - t3) / steps;
        const double value = sc_objective_raw(snr, beta, p);
        if (value > best_value) {
          best_value = value;
          best_p = p;
        }
      }
    }
    // Coordinate ascent on (p_1, p_2) with p_0 implied.
    p = best_p;
    double previous = -std::numeric_limits<double>::infinity();
    for (int round = 0; round < 40; ++round) {
      for (int coord = 1; coord <= 2; ++coord) {
        const int other = coord == 1 ? 2 : 1;
        const double limit = 1.0 - p[other];
        const double refined = golden_max(
            [&](double x) {
              p[coord] = x;
              p[0] = 1.0 - p[coord] - p[other];
              return sc_objective_raw(snr, beta, p);
            },
            0.0, limit, 1e-10, p[coord]);
        p[coord] = refined;
        p[0] = 1.0 - p[1] - p[2];
      }
      const double value = sc_objective_raw(snr, beta, p);
      if (value - previous <= 1e-13 * std::max(1.0, std::abs(value))) break;
      previous = value;
    }
    if (sc_objective_raw(snr, beta, p) > best_value) best_p = p;
  }

  // Guard against negative round-off in the implied coordinate.
  for (Index i = 0; i < n; ++i) best_p[i] = std::max(0.0, best_p[i]);
  best_p /= best_p.sum();

  Vec original = Vec::Zero(n);
  for (Index i = 0; i < n; ++i) original[order[i]] = best_p[i];
  PowerAllocation alloc(std::move(original));
  const double objective = sc_objective_any(state, weights, alloc);
  return {std::move(alloc), objective, resolution};
}

}  // namespace scsim
