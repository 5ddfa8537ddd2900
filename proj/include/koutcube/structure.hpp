#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "koutcube/graph.hpp"
#include "koutcube/sampler.hpp"

namespace koutcube {

struct ComponentSummary {
  std::vector<std::uint64_t> sizes;  // descending
  std::uint64_t count = 0;
  std::uint64_t vertex_total = 0;
  double giant_fraction = 0.0;   // largest / vertex_total
  double second_fraction = 0.0;  // second largest / vertex_total

  // vertex_total defaults to the sum of sizes.
  static ComponentSummary from_sizes(std::vector<std::uint64_t> sizes,
                                     std::uint64_t vertex_total = 0);
};

inline constexpr std::uint32_t kNoComponent = std::numeric_limits<std::uint32_t>::max();

// Component id per vertex. Components are numbered in increasing order of
// their smallest vertex; removed vertices carry kNoComponent.
struct ComponentLabels {
  std::vector<std::uint32_t> label;
  std::vector<std::uint64_t> sizes;  // indexed by component id

  std::vector<std::vector<VertexId>> members() const;
  ComponentSummary summary() const;
};

// Union-find over a flat array: parent[v] >= 0 links to the parent, a
// negative entry marks a root holding minus its set size.
class DisjointSets {
 public:
  explicit DisjointSets(std::uint64_t count) : parent_(count, -1) {}

  VertexId find(VertexId v) noexcept {
    while (parent_[v] >= 0) {
      const auto p = static_cast<VertexId>(parent_[v]);
      if (parent_[p] < 0) return p;
      parent_[v] = parent_[p];  // path halving
      v = static_cast<VertexId>(parent_[p]);
    }
    return v;
  }

  bool unite(VertexId a, VertexId b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (parent_[a] > parent_[b]) std::swap(a, b);  // a is the larger set
    parent_[a] += parent_[b];
    parent_[b] = static_cast<std::int32_t>(a);
    return true;
  }

  bool is_root(VertexId v) const noexcept { return parent_[v] < 0; }
  std::uint64_t root_size(VertexId root) const noexcept {
    return static_cast<std::uint64_t>(-static_cast<std::int64_t>(parent_[root]));
  }
  std::uint64_t element_count() const noexcept { return parent_.size(); }

 private:
  std::vector<std::int32_t> parent_;
};

namespace detail {

template <AdjacencyOracle G>
DisjointSets unite_edges(const G& g, std::span<const std::uint8_t> removed) {
  const std::uint64_t count = g.vertex_count();
  DisjointSets sets(count);
  for (VertexId v = 0; v < count; ++v) {
    if (!removed.empty() && removed[v]) continue;
    g.for_each_neighbor(v, [&](VertexId w) {
      if (w > v && (removed.empty() || !removed[w])) sets.unite(v, w);
    });
  }
  return sets;
}

}  // namespace detail

// Exact component census by union-find (path halving, union by size).
template <AdjacencyOracle G>
ComponentSummary components(const G& g, std::span<const std::uint8_t> removed = {}) {
  DisjointSets sets = detail::unite_edges(g, removed);
  std::vector<std::uint64_t> sizes;
  std::uint64_t total = 0;
  for (VertexId v = 0; v < sets.element_count(); ++v) {
    if ((!removed.empty() && removed[v]) || !sets.is_root(v)) continue;
    sizes.push_back(sets.root_size(v));
    total += sizes.back();
  }
  return ComponentSummary::from_sizes(std::move(sizes), total);
}

template <AdjacencyOracle G>
ComponentLabels label_components(const G& g, std::span<const std::uint8_t> removed = {}) {
  DisjointSets sets = detail::unite_edges(g, removed);
  const std::uint64_t count = g.vertex_count();
  ComponentLabels out;
  out.label.assign(count, kNoComponent);
  // First pass writes root -> id into the root's own slot.
  for (VertexId v = 0; v < count; ++v) {
    if (!removed.empty() && removed[v]) continue;
    const VertexId root = sets.find(v);
    if (out.label[root] == kNoComponent) {
      out.label[root] = static_cast<std::uint32_t>(out.sizes.size());
      out.sizes.push_back(sets.root_size(root));
    }
    out.label[v] = out.label[root];
  }
  return out;
}

// Breadth-first labeling with the same numbering; an independent route used
// to cross-check the union-find path.
template <AdjacencyOracle G>
ComponentLabels label_components_bfs(const G& g, std::span<const std::uint8_t> removed = {}) {
  const std::uint64_t count = g.vertex_count();
  ComponentLabels out;
  out.label.assign(count, kNoComponent);
  std::deque<VertexId> queue;
  for (VertexId s = 0; s < count; ++s) {
    if ((!removed.empty() && removed[s]) || out.label[s] != kNoComponent) continue;
    const auto id = static_cast<std::uint32_t>(out.sizes.size());
    std::uint64_t size = 0;
    out.label[s] = id;
    queue.push_back(s);
    while (!queue.empty()) {
      const VertexId v = queue.front();
      queue.pop_front();
      ++size;
      g.for_each_neighbor(v, [&](VertexId w) {
        if ((!removed.empty() && removed[w]) || out.label[w] != kNoComponent) return;
        out.label[w] = id;
        queue.push_back(w);
      });
    }
    out.sizes.push_back(size);
  }
  return out;
}

struct CycleCensus {
  std::map<std::uint64_t, std::uint64_t> counts;  // cycle length -> cycles
  std::uint64_t two_cycles = 0;                   // X_2
  std::uint64_t longer = 0;                       // cycles of length >= 4
  std::uint64_t max_tail = 0;  // longest walk before reaching a cycle vertex

  std::uint64_t cycle_count() const noexcept { return two_cycles + longer; }
  // Y_len: vertices lying on cycles of the given length.
  std::uint64_t vertices_on_cycles(std::uint64_t length) const;
};

// Cycles and tails of the functional digraph in O(2^n) by iterative orbit
// walking with three-state coloring.
CycleCensus cycle_census(const FunctionalMap& f);

// Z' = sum of squared component sizes; (largest)^2 <= Z'.
std::uint64_t pair_statistic(const ComponentSummary& summary);
// Z = unordered same-component pairs of distinct vertices; Z' = 2Z + 2^n.
std::uint64_t same_component_pairs(const ComponentSummary& summary);

struct TrajectoryView {
  std::vector<VertexId> orbit;        // f^0(v) .. f^m(v)
  std::vector<int> flips;             // flips[i]: coordinate between f^i(v) and f^{i+1}(v)
  std::vector<int> distance;          // |L_i(v)| = Hamming distance of f^i(v) from v
  std::vector<std::uint8_t> fresh;    // f^i(v) not seen earlier in the orbit
};

TrajectoryView trajectory(const FunctionalMap& f, VertexId v, std::uint64_t max_steps);

// Exact number of vertex sets S with v in S, |S| = s and Q^n[S] connected,
// by exhaustive enumeration. Refuses (BudgetExceeded) beyond n = 4 or s = 6.
std::uint64_t count_connected_sets(Dimension n, VertexId v, int s);

// (e n)^s.
double connected_set_bound(Dimension n, int s);

}  // namespace koutcube
