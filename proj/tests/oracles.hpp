#pragma once

// Slow, obviously-correct reference computations used only by tests.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace oracle {

using Adjacency = std::vector<std::vector<std::uint32_t>>;

// Undirected adjacency lists from per-vertex chosen direction masks.
inline Adjacency cube_adjacency(int n, const std::vector<std::uint32_t>& choices) {
  const std::uint32_t count = 1U << n;
  std::vector<std::set<std::uint32_t>> sets(count);
  for (std::uint32_t v = 0; v < count; ++v) {
    for (int d = 0; d < n; ++d) {
      if ((choices[v] >> d) & 1U) {
        sets[v].insert(v ^ (1U << d));
        sets[v ^ (1U << d)].insert(v);
      }
    }
  }
  Adjacency out(count);
  for (std::uint32_t v = 0; v < count; ++v) out[v].assign(sets[v].begin(), sets[v].end());
  return out;
}

// Component sizes of the graph minus `removed`, by repeated flood fill.
inline std::vector<std::uint64_t> component_sizes(const Adjacency& g,
                                                  const std::vector<bool>& removed = {}) {
  const auto count = static_cast<std::uint32_t>(g.size());
  std::vector<int> seen(count, 0);
  std::vector<std::uint64_t> sizes;
  for (std::uint32_t s = 0; s < count; ++s) {
    if (seen[s] || (!removed.empty() && removed[s])) continue;
    std::vector<std::uint32_t> stack{s};
    seen[s] = 1;
    std::uint64_t size = 0;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      ++size;
      for (auto w : g[v]) {
        if (!seen[w] && (removed.empty() || !removed[w])) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    sizes.push_back(size);
  }
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

// Vertex connectivity by exhaustive removal: the smallest |R| such that
// G - R is disconnected, or m - 1 if no such R exists (complete graph).
// Only for graphs with at most ~20 vertices.
inline int vertex_connectivity(const Adjacency& g) {
  const auto m = static_cast<std::uint32_t>(g.size());
  if (m <= 1) return 0;
  int best = static_cast<int>(m) - 1;
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << m); ++r) {
    const int size = std::popcount(r);
    if (size >= best || size > static_cast<int>(m) - 2) continue;
    std::vector<bool> removed(m);
    for (std::uint32_t v = 0; v < m; ++v) removed[v] = (r >> v) & 1U;
    if (component_sizes(g, removed).size() >= 2) best = size;
  }
  return best;
}

// All vertex sets (as bitmasks over <= 32 vertices) that contain v, have
// `size` elements and induce a connected subgraph; grown one neighbor at a time.
inline std::set<std::uint64_t> connected_sets(const Adjacency& g, std::uint32_t v, int size) {
  std::set<std::uint64_t> layer{std::uint64_t{1} << v};
  for (int s = 1; s < size; ++s) {
    std::set<std::uint64_t> next;
    for (std::uint64_t set : layer) {
      for (std::uint32_t u = 0; u < g.size(); ++u) {
        if (!((set >> u) & 1U)) continue;
        for (auto w : g[u]) {
          if (!((set >> w) & 1U)) next.insert(set | (std::uint64_t{1} << w));
        }
      }
    }
    layer = std::move(next);
  }
  return layer;
}

inline Adjacency full_cube(int n) {
  return cube_adjacency(n, std::vector<std::uint32_t>(1U << n, (1U << n) - 1U));
}

}  // namespace oracle
