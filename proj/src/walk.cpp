#include "koutcube/walk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "koutcube/errors.hpp"
#include "koutcube/kernels.hpp"

namespace koutcube {

namespace {

constexpr std::uint64_t kMaxCells = std::uint64_t{1} << 25;

class KahanSum {
 public:
  void add(double x) noexcept {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const noexcept { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

double kahan_total(std::span<const double> xs) {
  KahanSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

struct Kernel {
  std::vector<double> up;
  std::vector<double> down;
};

Kernel transition_kernel(int n) {
  Kernel k;
  k.up.resize(static_cast<std::size_t>(n) + 1);
  k.down.resize(static_cast<std::size_t>(n) + 1);
  for (int s = 0; s <= n; ++s) {
    k.up[s] = static_cast<double>(n - s) / n;
    k.down[s] = static_cast<double>(s) / n;
  }
  return k;
}

int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace

WalkParams WalkParams::for_dimension(int n) {
  WalkParams p{n, 2 * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n)};
  p.validate();
  return p;
}

void WalkParams::validate() const {
  if (n < 1) throw InvalidParameter("walk needs n >= 1");
  if (horizon < 1) throw InvalidParameter("walk horizon must be at least 1");
}

std::vector<int> simulate_walk(const WalkParams& params, Seed seed) {
  params.validate();
  std::vector<int> states;
  states.reserve(params.horizon + 1);
  auto rng = make_stream(seed, StreamTag::walk, 0);
  int state = 0;
  states.push_back(state);
  for (std::uint64_t i = 0; i < params.horizon; ++i) {
    // Down iff a uniform coordinate lands among the `state` differing ones.
    if (rng.below(static_cast<std::uint32_t>(params.n)) < static_cast<std::uint32_t>(state)) {
      --state;
    } else {
      ++state;
    }
    states.push_back(state);
  }
  return states;
}

std::span<const double> WalkDistribution::at(std::uint64_t step) const {
  if (step > horizon_) throw InvalidParameter("step beyond the computed horizon");
  const std::size_t width = static_cast<std::size_t>(n_) + 1;
  return std::span<const double>(rows_).subspan(step * width, width);
}

double WalkDistribution::at_most(std::uint64_t step, int threshold) const {
  const auto row = at(step);
  const int last = std::min(threshold, n_);
  if (last < 0) return 0.0;
  return kahan_total(row.first(static_cast<std::size_t>(last) + 1));
}

WalkDistribution exact_distribution(const WalkParams& params) {
  params.validate();
  const std::uint64_t width = static_cast<std::uint64_t>(params.n) + 1;
  if ((params.horizon + 1) > kMaxCells / width) {
    throw BudgetExceeded("walk DP needs " + std::to_string((params.horizon + 1) * width) +
                         " cells, budget is " + std::to_string(kMaxCells));
  }
  const int n = params.n;
  const Kernel kernel = transition_kernel(n);

  WalkDistribution out;
  out.n_ = n;
  out.horizon_ = params.horizon;
  out.rows_.assign((params.horizon + 1) * width, 0.0);
  out.rows_[0] = 1.0;

  const std::uint64_t n2 = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
  out.window_first_ = static_cast<std::uint64_t>(ceil_div(n, 4));
  out.window_last_ = std::min(n2, params.horizon / 2);

  // Second copy of the chain in which mass at 0 is removed at window times.
  std::vector<double> live(width, 0.0);
  std::vector<double> next(width, 0.0);
  live[0] = 1.0;
  KahanSum absorbed;

  for (std::uint64_t i = 1; i <= params.horizon; ++i) {
    const std::span<const double> prev(out.rows_.data() + (i - 1) * width, width);
    const std::span<double> cur(out.rows_.data() + i * width, width);
    kernels::walk_step(prev, kernel.up, kernel.down, cur);
    out.conservation_error_ = std::max(out.conservation_error_, std::abs(kahan_total(cur) - 1.0));

    kernels::walk_step(live, kernel.up, kernel.down, next);
    live.swap(next);
    if (i % 2 == 0 && i / 2 >= out.window_first_ && i / 2 <= n2) {
      absorbed.add(live[0]);
      live[0] = 0.0;
    }
    out.absorbed_error_ =
        std::max(out.absorbed_error_, std::abs(kahan_total(live) + absorbed.value() - 1.0));
  }
  out.window_hit_ = absorbed.value();
  return out;
}

double step_probability_at_most(int n, int start, std::uint64_t steps, int threshold) {
  if (n < 1 || start < 0 || start > n) throw InvalidParameter("start state outside [0, n]");
  const Kernel kernel = transition_kernel(n);
  std::vector<double> cur(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> next(cur.size(), 0.0);
  cur[static_cast<std::size_t>(start)] = 1.0;
  for (std::uint64_t i = 0; i < steps; ++i) {
    kernels::walk_step(cur, kernel.up, kernel.down, next);
    cur.swap(next);
  }
  if (threshold < 0) return 0.0;
  const int last = std::min(threshold, n);
  return kahan_total(std::span<const double>(cur).first(static_cast<std::size_t>(last) + 1));
}

bool WalkBoundReport::conditional_ok() const noexcept {
  if (conditional_worst > exp_bound) return false;
  return std::all_of(conditional_grid.begin(), conditional_grid.end(),
                     [&](const auto& point) { return point.second <= exp_bound; });
}

WalkBoundReport check_walk_bounds(int n, int grid_points) {
  if (n < 1) throw InvalidParameter("walk needs n >= 1");
  WalkBoundReport r;
  r.n = n;
  const auto dist = exact_distribution(WalkParams::for_dimension(n));
  r.window_hit_probability = dist.window_hit_probability();
  r.window_bound = std::pow(static_cast<double>(n), -4.0);

  r.early_step = static_cast<std::uint64_t>(n / 5);
  r.low_threshold = ceil_div(n, 20);
  r.early_low_probability = dist.at_most(r.early_step, r.low_threshold);
  r.exp_bound = std::exp(-1e-3 * n);

  r.conditional_steps = static_cast<std::uint64_t>(n / 40);
  r.conditional_from = ceil_div(n, 20);
  std::vector<double> from_state(static_cast<std::size_t>(n) + 1, 0.0);
  for (int s = r.conditional_from; s <= n; ++s) {
    from_state[static_cast<std::size_t>(s)] =
        step_probability_at_most(n, s, r.conditional_steps, r.low_threshold);
    r.conditional_worst = std::max(r.conditional_worst, from_state[static_cast<std::size_t>(s)]);
  }

  // Mix the point-mass answers with the actual law of L_i on a grid of times.
  const std::uint64_t n2 = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
  const int points = std::max(grid_points, 2);
  for (int g = 0; g < points; ++g) {
    const std::uint64_t i = n2 * static_cast<std::uint64_t>(g) / static_cast<std::uint64_t>(points - 1);
    const auto row = dist.at(i);
    KahanSum joint;
    KahanSum given;
    for (int s = r.conditional_from; s <= n; ++s) {
      joint.add(row[static_cast<std::size_t>(s)] * from_state[static_cast<std::size_t>(s)]);
      given.add(row[static_cast<std::size_t>(s)]);
    }
    if (given.value() > 0.0) r.conditional_grid.emplace_back(i, joint.value() / given.value());
  }
  return r;
}

}  // namespace koutcube
