#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace koutcube::stats {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Wilson score interval for a binomial proportion; z = 1.96 gives 95%.
// Bounds are clamped to [0, 1]. For trials == 0 returns [0, 1].
Interval wilson(std::uint64_t successes, std::uint64_t trials, double z = 1.96);

// Welford accumulator.
class RunningStats {
 public:
  void add(double x) noexcept;

  std::uint64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  // Sample (n - 1) standard deviation; 0 for fewer than two values.
  double stddev() const noexcept;
  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

// Homogeneity test of two count vectors over the same categories. Categories
// empty in both rows are dropped; with fewer than two remaining the test is
// vacuous (statistic 0, p = 1).
ChiSquareResult chi_square_homogeneity(std::span<const std::uint64_t> a,
                                       std::span<const std::uint64_t> b);

// sqrt(p (1 - p) / trials).
double binomial_sigma(double p, std::uint64_t trials);

}  // namespace koutcube::stats
