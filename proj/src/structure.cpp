#include "koutcube/structure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <unordered_set>

namespace koutcube {

ComponentSummary ComponentSummary::from_sizes(std::vector<std::uint64_t> sizes,
                                              std::uint64_t vertex_total) {
  ComponentSummary out;
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  std::uint64_t sum = 0;
  for (auto s : sizes) sum += s;
  out.vertex_total = vertex_total == 0 ? sum : vertex_total;
  out.count = sizes.size();
  if (out.vertex_total > 0) {
    const double total = static_cast<double>(out.vertex_total);
    if (!sizes.empty()) out.giant_fraction = static_cast<double>(sizes[0]) / total;
    if (sizes.size() > 1) out.second_fraction = static_cast<double>(sizes[1]) / total;
  }
  out.sizes = std::move(sizes);
  return out;
}

std::vector<std::vector<VertexId>> ComponentLabels::members() const {
  std::vector<std::vector<VertexId>> out(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) out[i].reserve(sizes[i]);
  for (VertexId v = 0; v < label.size(); ++v) {
    if (label[v] != kNoComponent) out[label[v]].push_back(v);
  }
  return out;
}

ComponentSummary ComponentLabels::summary() const {
  std::uint64_t total = 0;
  for (auto s : sizes) total += s;
  return ComponentSummary::from_sizes(sizes, total);
}

std::uint64_t CycleCensus::vertices_on_cycles(std::uint64_t length) const {
  const auto it = counts.find(length);
  return it == counts.end() ? 0 : it->second * length;
}

CycleCensus cycle_census(const FunctionalMap& f) {
  constexpr std::uint32_t kUnvisited = 0;
  constexpr std::uint32_t kFinished = std::numeric_limits<std::uint32_t>::max();
  const std::uint64_t count = f.n().vertex_count();
  std::vector<std::uint32_t> mark(count, kUnvisited);
  std::vector<std::uint32_t> depth(count, 0);
  std::vector<VertexId> path;
  CycleCensus census;
  std::uint32_t walk = 0;

  for (VertexId start = 0; start < count; ++start) {
    if (mark[start] != kUnvisited) continue;
    ++walk;
    path.clear();
    VertexId v = start;
    while (mark[v] == kUnvisited) {
      mark[v] = walk;
      path.push_back(v);
      v = f.target(v);
    }
    const std::size_t len = path.size();
    if (mark[v] == walk) {
      // Closed a new cycle; v sits on the current path.
      std::size_t first = len - 1;
      while (path[first] != v) --first;
      const std::uint64_t cycle = len - first;
      ++census.counts[cycle];
      if (cycle == 2) {
        ++census.two_cycles;
      } else {
        ++census.longer;
      }
      for (std::size_t i = 0; i < len; ++i) {
        depth[path[i]] = i < first ? static_cast<std::uint32_t>(first - i) : 0;
      }
    } else {
      const std::uint32_t base = depth[v];
      for (std::size_t i = 0; i < len; ++i) {
        depth[path[i]] = base + static_cast<std::uint32_t>(len - i);
      }
    }
    for (VertexId u : path) {
      mark[u] = kFinished;
      census.max_tail = std::max<std::uint64_t>(census.max_tail, depth[u]);
    }
  }
  return census;
}

std::uint64_t pair_statistic(const ComponentSummary& summary) {
  std::uint64_t z = 0;
  for (auto s : summary.sizes) z += s * s;
  return z;
}

std::uint64_t same_component_pairs(const ComponentSummary& summary) {
  std::uint64_t z = 0;
  for (auto s : summary.sizes) z += s * (s - 1) / 2;
  return z;
}

TrajectoryView trajectory(const FunctionalMap& f, VertexId v, std::uint64_t max_steps) {
  if (max_steps < 1) throw InvalidParameter("trajectory needs at least one step");
  if (!f.n().contains(v)) throw InvalidParameter("start vertex outside the cube");
  TrajectoryView out;
  out.orbit.reserve(max_steps + 1);
  std::unordered_set<VertexId> seen;
  VertexId cur = v;
  for (std::uint64_t i = 0; i <= max_steps; ++i) {
    out.orbit.push_back(cur);
    out.distance.push_back(std::popcount(cur ^ v));
    out.fresh.push_back(seen.insert(cur).second ? 1 : 0);
    if (i == max_steps) break;
    out.flips.push_back(f.direction(cur));
    cur = f.target(cur);
  }
  return out;
}

std::uint64_t count_connected_sets(Dimension n, VertexId v, int s) {
  if (n.value() > 4 || s > 6) {
    throw BudgetExceeded("connected-set enumeration is limited to n <= 4 and s <= 6");
  }
  if (!n.contains(v)) throw InvalidParameter("vertex outside the cube");
  const std::uint64_t count = n.vertex_count();
  if (s < 1 || static_cast<std::uint64_t>(s) > count) {
    throw InvalidParameter("set size must be in [1, 2^n]");
  }

  // Subsets of V are bitmasks over at most 16 vertices.
  auto neighborhood = [&](std::uint32_t set) {
    std::uint32_t out = 0;
    for (std::uint32_t m = set; m != 0; m &= m - 1) {
      const auto u = static_cast<VertexId>(std::countr_zero(m));
      for (int d = 0; d < n.value(); ++d) out |= std::uint32_t{1} << flip(u, d);
    }
    return out;
  };
  auto connected = [&](std::uint32_t set) {
    std::uint32_t reached = set & (~set + 1);
    for (;;) {
      const std::uint32_t next = reached | (neighborhood(reached) & set);
      if (next == reached) return reached == set;
      reached = next;
    }
  };

  std::uint64_t total = 0;
  const std::uint32_t limit = count == 32 ? 0 : (std::uint32_t{1} << count);
  // Gosper's hack over all s-subsets.
  std::uint32_t set = (std::uint32_t{1} << s) - 1;
  while (set < limit) {
    if ((set >> v) & 1U) total += connected(set) ? 1 : 0;
    const std::uint32_t c = set & (~set + 1);
    const std::uint32_t r = set + c;
    set = (((r ^ set) >> 2) / c) | r;
  }
  return total;
}

double connected_set_bound(Dimension n, int s) {
  return std::pow(std::numbers::e * n.value(), s);
}

}  // namespace koutcube
