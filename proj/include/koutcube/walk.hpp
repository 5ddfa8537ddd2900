#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "koutcube/rng.hpp"

namespace koutcube {

// The birth-death chain on {0, ..., n} started at 0 that steps down with
// probability L/n and up with probability (n - L)/n. It tracks the Hamming
// distance of a fresh 1-out orbit from its start vertex. Here n is not tied
// to a cube that must fit in memory, so it is not capped at 30.
struct WalkParams {
  int n = 1;
  std::uint64_t horizon = 2;  // number of steps

  // horizon = 2 n^2, long enough to cover every even time 2l with l <= n^2.
  static WalkParams for_dimension(int n);
  void validate() const;
};

// States L_0 = 0, L_1, ..., L_horizon.
std::vector<int> simulate_walk(const WalkParams& params, Seed seed);

// Exact law of L_i for every step, plus the probability that L_{2l} = 0 for
// some l in [ceil(n/4), n^2] (computed with an absorbing accumulator so the
// union is counted once; truncated at the horizon).
class WalkDistribution {
 public:
  int n() const noexcept { return n_; }
  std::uint64_t horizon() const noexcept { return horizon_; }
  std::span<const double> at(std::uint64_t step) const;
  double mass(std::uint64_t step, int state) const { return at(step)[static_cast<std::size_t>(state)]; }
  // P(L_step <= threshold).
  double at_most(std::uint64_t step, int threshold) const;

  double window_hit_probability() const noexcept { return window_hit_; }
  std::uint64_t window_first() const noexcept { return window_first_; }
  std::uint64_t window_last() const noexcept { return window_last_; }
  // Largest |sum_s P(L_i = s) - 1| over all steps, and the same for
  // (unabsorbed mass + absorbed mass) in the window computation.
  double conservation_error() const noexcept { return conservation_error_; }
  double absorbed_conservation_error() const noexcept { return absorbed_error_; }

 private:
  friend WalkDistribution exact_distribution(const WalkParams& params);

  int n_ = 0;
  std::uint64_t horizon_ = 0;
  std::vector<double> rows_;  // (horizon + 1) x (n + 1), row-major
  double window_hit_ = 0.0;
  std::uint64_t window_first_ = 0;
  std::uint64_t window_last_ = 0;
  double conservation_error_ = 0.0;
  double absorbed_error_ = 0.0;
};

// Refuses with BudgetExceeded when (horizon + 1)(n + 1) exceeds 2^25 cells.
WalkDistribution exact_distribution(const WalkParams& params);

// P(L_steps <= threshold | L_0 = start), by DP from a point mass.
double step_probability_at_most(int n, int start, std::uint64_t steps, int threshold);

// The three inequalities that together bound returns to the origin after
// time n/2, each evaluated exactly for one n. Index bounds n/5 and n/40 are
// floored; the threshold n/20 on the "<=" side is ceiled; the conditioning
// event L_i >= n/20 is taken exactly (states >= ceil(n/20)).
struct WalkBoundReport {
  int n = 0;
  double window_hit_probability = 0.0;
  double window_bound = 0.0;  // n^-4

  std::uint64_t early_step = 0;  // floor(n/5)
  int low_threshold = 0;         // ceil(n/20)
  double early_low_probability = 0.0;  // P(L_{floor(n/5)} <= ceil(n/20))
  double exp_bound = 0.0;              // exp(-n/1000)

  std::uint64_t conditional_steps = 0;  // floor(n/40)
  int conditional_from = 0;             // ceil(n/20)
  // max over start states s >= ceil(n/20) of P(L_{floor(n/40)} <= ceil(n/20) | L_0 = s)
  double conditional_worst = 0.0;
  // (i, P(L_{i+floor(n/40)} <= ceil(n/20) | L_i >= n/20)) on a grid of i in [0, n^2]
  std::vector<std::pair<std::uint64_t, double>> conditional_grid;

  bool window_ok() const noexcept { return window_hit_probability <= window_bound; }
  bool early_ok() const noexcept { return early_low_probability <= exp_bound; }
  bool conditional_ok() const noexcept;
};

WalkBoundReport check_walk_bounds(int n, int grid_points = 16);

}  // namespace koutcube
