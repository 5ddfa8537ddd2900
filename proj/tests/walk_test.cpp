#include "koutcube/walk.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "koutcube/errors.hpp"
#include "koutcube/stats.hpp"

using namespace koutcube;

namespace {

// Plain long-double forward recursion for the law of L_i, plus the
// probability of a return to 0 at some even time 2l, l in [first, last],
// obtained by deleting that mass as it is counted.
struct OracleLaw {
  std::vector<std::vector<long double>> rows;
  long double window_hit = 0.0L;
};

OracleLaw oracle_law(int n, std::uint64_t horizon, std::uint64_t first, std::uint64_t last) {
  OracleLaw out;
  std::vector<long double> cur(n + 1, 0.0L);
  std::vector<long double> live(n + 1, 0.0L);
  cur[0] = live[0] = 1.0L;
  out.rows.push_back(cur);
  auto step = [n](const std::vector<long double>& in) {
    std::vector<long double> next(n + 1, 0.0L);
    for (int s = 0; s <= n; ++s) {
      if (s > 0) next[s - 1] += in[s] * s / n;
      if (s < n) next[s + 1] += in[s] * (n - s) / n;
    }
    return next;
  };
  for (std::uint64_t i = 1; i <= horizon; ++i) {
    cur = step(cur);
    live = step(live);
    out.rows.push_back(cur);
    if (i % 2 == 0 && i / 2 >= first && i / 2 <= last) {
      out.window_hit += live[0];
      live[0] = 0.0L;
    }
  }
  return out;
}

}  // namespace

TEST(WalkParams, DefaultsAndValidation) {
  EXPECT_EQ(WalkParams::for_dimension(7).horizon, 98U);
  EXPECT_THROW(WalkParams::for_dimension(0), InvalidParameter);
  EXPECT_THROW((WalkParams{5, 0}.validate()), InvalidParameter);
}

TEST(SimulateWalk, FollowsKernel) {
  const WalkParams p{6, 400};
  for (std::uint64_t r = 0; r < 50; ++r) {
    const auto path = simulate_walk(p, Seed{3, r});
    ASSERT_EQ(path.size(), 401U);
    EXPECT_EQ(path[0], 0);
    EXPECT_EQ(path[1], 1);  // 0 steps up with probability 1
    for (std::size_t i = 1; i < path.size(); ++i) {
      EXPECT_EQ(std::abs(path[i] - path[i - 1]), 1);
      if (path[i - 1] == 6) { EXPECT_EQ(path[i], 5); }  // n steps down with probability 1
      EXPECT_GE(path[i], 0);
      EXPECT_LE(path[i], 6);
    }
  }
  EXPECT_EQ(simulate_walk(p, Seed{3, 1}), simulate_walk(p, Seed{3, 1}));
}

TEST(ExactDistribution, HandValueAtN2) {
  const WalkDistribution d = exact_distribution(WalkParams{2, 4});
  EXPECT_EQ(d.mass(2, 0), 0.5);
  EXPECT_EQ(d.mass(1, 1), 1.0);
}

TEST(ExactDistribution, MatchesOracleAndParity) {
  for (int n : {3, 8, 13, 30}) {
    const WalkParams p = WalkParams::for_dimension(n);
    const WalkDistribution d = exact_distribution(p);
    const OracleLaw o = oracle_law(n, p.horizon, d.window_first(), d.window_last());
    EXPECT_EQ(d.window_first(), static_cast<std::uint64_t>((n + 3) / 4));
    EXPECT_EQ(d.window_last(), static_cast<std::uint64_t>(n) * n);
    for (std::uint64_t i = 0; i <= p.horizon; ++i) {
      const auto row = d.at(i);
      for (int s = 0; s <= n; ++s) {
        ASSERT_NEAR(row[s], static_cast<double>(o.rows[i][s]), 1e-13) << "n=" << n << " i=" << i;
        if ((s + i) % 2 == 1) { ASSERT_EQ(row[s], 0.0); }
      }
    }
    EXPECT_NEAR(d.window_hit_probability(), static_cast<double>(o.window_hit),
                1e-12 * std::max(1.0, static_cast<double>(o.window_hit)));
    EXPECT_LT(d.conservation_error(), 1e-12);
    EXPECT_LT(d.absorbed_conservation_error(), 1e-12);
  }
}

TEST(ExactDistribution, AtMostSumsTheLowStates) {
  const WalkDistribution d = exact_distribution(WalkParams{10, 50});
  double sum = 0.0;
  for (int s = 0; s <= 3; ++s) sum += d.mass(20, s);
  EXPECT_NEAR(d.at_most(20, 3), sum, 1e-15);
  EXPECT_DOUBLE_EQ(d.at_most(20, 10), d.at_most(20, 12));
  EXPECT_THROW(d.at(51), InvalidParameter);
}

TEST(ExactDistribution, RefusesHugeTables) {
  EXPECT_THROW(exact_distribution(WalkParams::for_dimension(400)), BudgetExceeded);
}

TEST(StepProbability, MatchesShiftedOracle) {
  // From a point mass at s the chain is the same recursion started elsewhere.
  const int n = 12;
  for (int start = 0; start <= n; ++start) {
    std::vector<long double> cur(n + 1, 0.0L);
    cur[start] = 1.0L;
    for (int i = 0; i < 5; ++i) {
      std::vector<long double> next(n + 1, 0.0L);
      for (int s = 0; s <= n; ++s) {
        if (s > 0) next[s - 1] += cur[s] * s / n;
        if (s < n) next[s + 1] += cur[s] * (n - s) / n;
      }
      cur = next;
    }
    long double low = 0.0L;
    for (int s = 0; s <= 4; ++s) low += cur[s];
    EXPECT_NEAR(step_probability_at_most(n, start, 5, 4), static_cast<double>(low), 1e-15);
  }
}

TEST(WalkBounds, HoldAtForty) {
  const WalkBoundReport r = check_walk_bounds(40);
  EXPECT_DOUBLE_EQ(r.window_bound, 3.90625e-7);
  EXPECT_EQ(r.early_step, 8U);
  EXPECT_EQ(r.low_threshold, 2);
  EXPECT_EQ(r.conditional_steps, 1U);
  EXPECT_TRUE(r.window_ok());
  EXPECT_TRUE(r.early_ok());
  EXPECT_TRUE(r.conditional_ok());
  // From state 3 one step lands at 2 with probability 3/40.
  EXPECT_NEAR(r.conditional_worst, 3.0 / 40.0, 1e-15);
}

TEST(WalkMonteCarlo, ReturnAtStepFourAgreesWithDp) {
  const int n = 20;
  const WalkParams p{n, 4};
  const double exact = exact_distribution(p).mass(4, 0);
  const std::uint64_t runs = 100000;
  std::uint64_t hits = 0;
  for (std::uint64_t r = 0; r < runs; ++r) hits += simulate_walk(p, Seed{17, r})[4] == 0;
  EXPECT_NEAR(static_cast<double>(hits) / runs, exact, 3 * stats::binomial_sigma(exact, runs));
}
