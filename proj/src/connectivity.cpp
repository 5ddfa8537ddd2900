#include "koutcube/connectivity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

#include "draws.hpp"
#include "koutcube/errors.hpp"

namespace koutcube {

std::map<int, std::uint64_t> DegreeCensus::as_map() const {
  std::map<int, std::uint64_t> out;
  for (std::size_t d = 0; d < histogram.size(); ++d) {
    if (histogram[d] != 0) out.emplace(static_cast<int>(d), histogram[d]);
  }
  return out;
}

DegreeCensus degree_census(const CubeGraph& g, int k) {
  DegreeCensus out;
  kernels::degree_histogram(g.masks(), out.histogram);
  out.k = k;
  if (k >= 0 && k < static_cast<int>(out.histogram.size())) out.degree_k_count = out.histogram[k];
  bool seen = false;
  for (std::size_t d = 0; d < out.histogram.size(); ++d) {
    if (out.histogram[d] == 0) continue;
    if (!seen) out.min_degree = static_cast<int>(d);
    out.max_degree = static_cast<int>(d);
    seen = true;
  }
  return out;
}

DegreeCensus degree_census(const KOutSample& sample) {
  return degree_census(as_undirected(sample), sample.k());
}

namespace {

void check_flow_size(std::uint64_t vertices) {
  if (vertices > kMaxFlowVertices) {
    throw BudgetExceeded("vertex connectivity is limited to " + std::to_string(kMaxFlowVertices) +
                         " vertices, got " + std::to_string(vertices));
  }
}

// Vertex-split residual network: vertex v becomes in-node 2v and out-node
// 2v+1 joined by a unit arc; each undirected edge u-v gives out(u)->in(v) and
// out(v)->in(u) with unbounded capacity. Arc i and i^1 are residual twins.
class SplitNetwork {
 public:
  explicit SplitNetwork(const SimpleGraph& g) : nodes_(2 * g.vertex_count()) {
    const std::uint64_t m = g.vertex_count();
    const auto big = static_cast<std::int32_t>(m + 1);
    std::vector<std::uint32_t> degree(nodes_, 0);
    auto count_arc = [&](std::uint32_t a, std::uint32_t b) {
      ++degree[a];
      ++degree[b];
    };
    for (VertexId v = 0; v < m; ++v) {
      count_arc(2 * v, 2 * v + 1);
      for (VertexId w : g.neighbors(v)) count_arc(2 * v + 1, 2 * w);
    }
    first_.assign(nodes_ + 1, 0);
    for (std::size_t i = 0; i < nodes_; ++i) first_[i + 1] = first_[i] + degree[i];
    head_.resize(first_[nodes_]);
    capacity_.resize(first_[nodes_]);
    twin_.resize(first_[nodes_]);
    std::vector<std::uint32_t> fill(first_.begin(), first_.end() - 1);
    auto add_arc = [&](std::uint32_t a, std::uint32_t b, std::int32_t cap) {
      const std::uint32_t i = fill[a]++;
      const std::uint32_t j = fill[b]++;
      head_[i] = b;
      capacity_[i] = cap;
      twin_[i] = j;
      head_[j] = a;
      capacity_[j] = 0;
      twin_[j] = i;
    };
    for (VertexId v = 0; v < m; ++v) {
      add_arc(2 * v, 2 * v + 1, 1);
      for (VertexId w : g.neighbors(v)) add_arc(2 * v + 1, 2 * w, big);
    }
    initial_ = capacity_;
    level_.resize(nodes_);
    cursor_.resize(nodes_);
  }

  // Max number of internally disjoint s-t paths, capped at `limit`.
  int max_paths(VertexId s, VertexId t, int limit) {
    capacity_ = initial_;
    const std::uint32_t source = 2 * s + 1;
    const std::uint32_t sink = 2 * t;
    int flow = 0;
    while (flow < limit && build_levels(source, sink)) {
      for (std::size_t i = 0; i < nodes_; ++i) cursor_[i] = first_[i];
      while (flow < limit && augment(source, sink)) ++flow;
    }
    return flow;
  }

 private:
  bool build_levels(std::uint32_t source, std::uint32_t sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::deque<std::uint32_t> queue{source};
    level_[source] = 0;
    while (!queue.empty()) {
      const std::uint32_t a = queue.front();
      queue.pop_front();
      for (std::uint32_t i = first_[a]; i < first_[a + 1]; ++i) {
        const std::uint32_t b = head_[i];
        if (capacity_[i] > 0 && level_[b] < 0) {
          level_[b] = level_[a] + 1;
          queue.push_back(b);
        }
      }
    }
    return level_[sink] >= 0;
  }

  // One unit augmenting path in the level graph, iterative DFS with
  // current-arc pointers. Every s-t path carries exactly one unit because
  // each internal vertex arc has capacity 1.
  bool augment(std::uint32_t source, std::uint32_t sink) {
    path_.clear();
    std::uint32_t a = source;
    while (a != sink) {
      bool advanced = false;
      for (std::uint32_t& i = cursor_[a]; i < first_[a + 1]; ++i) {
        const std::uint32_t b = head_[i];
        if (capacity_[i] > 0 && level_[b] == level_[a] + 1) {
          path_.push_back(i);
          a = b;
          advanced = true;
          break;
        }
      }
      if (advanced) continue;
      if (path_.empty()) return false;
      level_[a] = -1;  // dead end
      const std::uint32_t back = path_.back();
      path_.pop_back();
      a = head_[twin_[back]];
      ++cursor_[a];
    }
    for (std::uint32_t i : path_) {
      capacity_[i] -= 1;
      capacity_[twin_[i]] += 1;
    }
    return true;
  }

  std::size_t nodes_;
  std::vector<std::uint32_t> first_;
  std::vector<std::uint32_t> head_;
  std::vector<std::uint32_t> twin_;
  std::vector<std::int32_t> capacity_;
  std::vector<std::int32_t> initial_;
  std::vector<int> level_;
  std::vector<std::uint32_t> cursor_;
  std::vector<std::uint32_t> path_;
};

}  // namespace

int local_connectivity(const SimpleGraph& g, VertexId s, VertexId t, int limit) {
  check_flow_size(g.vertex_count());
  if (s >= g.vertex_count() || t >= g.vertex_count() || s == t) {
    throw InvalidParameter("local connectivity needs two distinct vertices of the graph");
  }
  if (g.has_edge(s, t)) throw InvalidParameter("local connectivity needs non-adjacent vertices");
  if (limit <= 0) return 0;
  SplitNetwork net(g);
  return net.max_paths(s, t, limit);
}

int vertex_connectivity(const SimpleGraph& g, int ceiling) {
  check_flow_size(g.vertex_count());
  if (ceiling < 0) throw InvalidParameter("ceiling must be non-negative");
  const auto m = static_cast<VertexId>(g.vertex_count());
  if (m <= 1 || ceiling == 0) return 0;

  VertexId s = 0;
  for (VertexId v = 1; v < m; ++v) {
    if (g.degree(v) < g.degree(s)) s = v;
  }
  // kappa <= min degree, with equality for complete graphs.
  int best = std::min(ceiling, g.degree(s));
  if (best == 0) return 0;

  SplitNetwork net(g);
  std::vector<std::uint8_t> near(m, 0);
  near[s] = 1;
  for (VertexId w : g.neighbors(s)) near[w] = 1;
  for (VertexId t = 0; t < m && best > 0; ++t) {
    if (!near[t]) best = std::min(best, net.max_paths(s, t, best));
  }
  const auto around = g.neighbors(s);
  for (std::size_t i = 0; i < around.size() && best > 0; ++i) {
    for (std::size_t j = i + 1; j < around.size() && best > 0; ++j) {
      if (!g.has_edge(around[i], around[j])) {
        best = std::min(best, net.max_paths(around[i], around[j], best));
      }
    }
  }
  return best;
}

int vertex_connectivity(const CubeGraph& g, int ceiling) {
  check_flow_size(g.vertex_count());
  return vertex_connectivity(SimpleGraph::from(g), ceiling);
}

bool DisconnectionCensus::contains_set(std::span<const VertexId> s) const {
  std::vector<VertexId> sorted(s.begin(), s.end());
  std::sort(sorted.begin(), sorted.end());
  return std::any_of(sets.begin(), sets.end(), [&](const auto& set) { return set == sorted; });
}

namespace {

void verify_partition(const CubeGraph& g, const DisconnectionCensus& census,
                      std::span<const std::uint8_t> removed) {
  const std::uint64_t count = g.vertex_count();
  std::vector<std::uint32_t> owner(count, kNoComponent);
  std::uint64_t covered = 0;
  for (std::uint32_t id = 0; id < census.sets.size(); ++id) {
    for (VertexId v : census.sets[id]) {
      if (removed[v] || owner[v] != kNoComponent) {
        throw std::logic_error("disconnected sets overlap each other or the removal set");
      }
      owner[v] = id;
      ++covered;
    }
  }
  if (covered + census.removal.size() != count) {
    throw std::logic_error("disconnected sets do not cover the vertices outside the removal set");
  }
  for (std::uint32_t id = 0; id < census.sets.size(); ++id) {
    const auto& set = census.sets[id];
    for (VertexId v : set) {
      g.for_each_neighbor(v, [&](VertexId w) {
        if (!removed[w] && owner[w] != id) {
          throw std::logic_error("edge leaves a disconnected set outside the removal set");
        }
      });
    }
    // Connectivity inside the set by a search restricted to it.
    std::vector<VertexId> stack{set.front()};
    std::vector<std::uint8_t> seen(count, 0);
    seen[set.front()] = 1;
    std::uint64_t reached = 0;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      ++reached;
      g.for_each_neighbor(v, [&](VertexId w) {
        if (owner[w] == id && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      });
    }
    if (reached != set.size()) throw std::logic_error("disconnected set is not connected");
  }
}

}  // namespace

DisconnectionCensus minimal_disconnected_sets(const CubeGraph& g,
                                              std::span<const VertexId> removal) {
  const std::uint64_t count = g.vertex_count();
  std::vector<std::uint8_t> removed(count, 0);
  DisconnectionCensus out;
  for (VertexId v : removal) {
    if (v >= count) throw InvalidParameter("removal vertex " + std::to_string(v) + " out of range");
    if (!removed[v]) out.removal.push_back(v);
    removed[v] = 1;
  }
  std::sort(out.removal.begin(), out.removal.end());
  out.sets = label_components(g, removed).members();
  verify_partition(g, out, removed);
  return out;
}

std::uint64_t ActiveSetReport::count() const noexcept {
  return static_cast<std::uint64_t>(std::count(active.begin(), active.end(), std::uint8_t{1}));
}

namespace {

// ESU enumeration of connected vertex sets of size <= cap, each reported once
// from its smallest vertex.
class ConnectedSetWalker {
 public:
  ConnectedSetWalker(const CubeGraph& g, int cap, int removal_size, ActiveSetReport& report)
      : g_(g), cap_(cap), removal_size_(removal_size), report_(report),
        stamp_(g.vertex_count(), 0) {}

  void run() {
    for (VertexId root = 0; root < g_.vertex_count(); ++root) {
      root_ = root;
      members_.assign(1, root);
      std::vector<VertexId> extension;
      g_.for_each_neighbor(root, [&](VertexId w) {
        if (w > root) extension.push_back(w);
      });
      extend(extension);
    }
  }

 private:
  bool adjacent_to_members(VertexId u) const {
    const DirectionMask mask = g_.adjacency(u);
    for (VertexId m : members_) {
      const VertexId diff = m ^ u;
      if (std::has_single_bit(diff) && (mask & diff)) return true;
    }
    return false;
  }

  bool is_member(VertexId u) const {
    return std::find(members_.begin(), members_.end(), u) != members_.end();
  }

  void extend(std::vector<VertexId> extension) {
    report();
    if (static_cast<int>(members_.size()) == cap_) return;
    while (!extension.empty()) {
      const VertexId w = extension.back();
      extension.pop_back();
      std::vector<VertexId> next = extension;
      g_.for_each_neighbor(w, [&](VertexId u) {
        if (u <= root_ || is_member(u) || adjacent_to_members(u)) return;
        if (std::find(next.begin(), next.end(), u) == next.end()) next.push_back(u);
      });
      members_.push_back(w);
      extend(std::move(next));
      members_.pop_back();
    }
  }

  void report() {
    ++epoch_;
    for (VertexId m : members_) stamp_[m] = epoch_;
    boundary_.clear();
    for (VertexId m : members_) {
      g_.for_each_neighbor(m, [&](VertexId u) {
        if (stamp_[u] != epoch_) {
          stamp_[u] = epoch_;
          boundary_.push_back(u);
        }
      });
    }
    if (static_cast<int>(boundary_.size()) > removal_size_) return;
    bool needs_witness = false;
    for (VertexId m : members_) {
      report_.active[m] = 1;
      needs_witness |= report_.witness_of[m] == ActiveSetReport::kNoWitness;
    }
    if (!needs_witness) return;

    ActiveWitness witness;
    witness.set = members_;
    std::sort(witness.set.begin(), witness.set.end());
    witness.removal = boundary_;
    // Pad L with the smallest vertices outside S and N(S).
    for (VertexId u = 0; u < g_.vertex_count() &&
                         static_cast<int>(witness.removal.size()) < removal_size_;
         ++u) {
      if (stamp_[u] != epoch_) witness.removal.push_back(u);
    }
    std::sort(witness.removal.begin(), witness.removal.end());
    const auto index = static_cast<std::uint32_t>(report_.witnesses.size());
    for (VertexId m : members_) {
      if (report_.witness_of[m] == ActiveSetReport::kNoWitness) report_.witness_of[m] = index;
    }
    report_.witnesses.push_back(std::move(witness));
  }

  const CubeGraph& g_;
  int cap_;
  int removal_size_;
  ActiveSetReport& report_;
  VertexId root_ = 0;
  std::vector<VertexId> members_;
  std::vector<VertexId> boundary_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 0;
};

}  // namespace

ActiveSetReport active_set(const KOutSample& g0, int cap) {
  if (cap < 1) throw InvalidParameter("active-set cap must be at least 1");
  if (cap > kMaxActiveCap) {
    throw BudgetExceeded("active-set cap " + std::to_string(cap) + " exceeds the enumeration limit " +
                         std::to_string(kMaxActiveCap));
  }
  const CubeGraph g = as_undirected(g0);
  ActiveSetReport report;
  report.cap = cap;
  report.removal_size = g0.k();
  report.active.assign(g.vertex_count(), 0);
  report.witness_of.assign(g.vertex_count(), ActiveSetReport::kNoWitness);
  ConnectedSetWalker(g, cap, report.removal_size, report).run();
  return report;
}

ActivePredicate active_set_predicate(int cap) {
  if (cap < 1) throw InvalidParameter("active-set cap must be at least 1");
  if (cap > kMaxActiveCap) throw BudgetExceeded("active-set cap exceeds the enumeration limit");
  return [cap](const KOutSample& g0) { return active_set(g0, cap).active; };
}

std::vector<SubcubeSpec> subcube_component_scan(const KOutSample& sample) {
  const Dimension n = sample.n();
  const DirectionMask full = n.full_mask();
  const ComponentLabels labels = label_components(as_undirected(sample));
  const std::size_t count = labels.sizes.size();
  std::vector<DirectionMask> all_ones(count, full);
  std::vector<DirectionMask> all_zeros(count, full);
  std::vector<DirectionMask> choices(count, 0);
  for (VertexId v = 0; v < n.vertex_count(); ++v) {
    const std::uint32_t id = labels.label[v];
    all_ones[id] &= v;
    all_zeros[id] &= ~v & full;
    choices[id] |= sample.choice(v);
  }
  std::vector<SubcubeSpec> out;
  for (std::size_t id = 0; id < count; ++id) {
    const DirectionMask free = full & ~(all_ones[id] | all_zeros[id]);
    if (free == full) continue;  // a connected sample is not a subcube witness
    if (labels.sizes[id] != (std::uint64_t{1} << std::popcount(free))) continue;
    if ((choices[id] & ~free) != 0) continue;
    out.push_back(SubcubeSpec{all_ones[id], free, all_zeros[id]});
  }
  return out;
}

KOutSample plant_subcube_component(Dimension n, int k, const SubcubeSpec& spec, Seed seed) {
  spec.validate(n);
  if (k < 1 || k > n.value()) throw InvalidParameter("k must lie in [1, n]");
  if (spec.free_count() != k) {
    throw InvalidSpec("planted subcube needs exactly k = " + std::to_string(k) +
                      " free coordinates, got " + std::to_string(spec.free_count()));
  }
  const DirectionMask full = n.full_mask();
  const DirectionMask fixed = full & ~spec.free;
  ChoiceMap map(n);
  for (VertexId v = 0; v < n.vertex_count(); ++v) {
    const DirectionMask off = (v ^ spec.ones) & fixed;  // fixed coordinates that disagree
    if (off == 0) {
      map.masks[v] = spec.free;
    } else if (std::has_single_bit(off)) {
      auto rng = make_stream(seed, StreamTag::plant, v);
      map.masks[v] = detail::random_subset_of(rng, full & ~off, k);
    } else {
      auto rng = make_stream(seed, StreamTag::kout, v);
      map.masks[v] = detail::random_subset(rng, n.value(), k);
    }
  }
  return KOutSample(k, std::move(map));
}

double threshold_k0(int n) {
  if (n < 2) throw InvalidParameter("k0 is defined for n >= 2");
  const double lg = std::log2(static_cast<double>(n));
  return lg - 2.0 * std::log2(lg);
}

int threshold_k1(int n) { return static_cast<int>(std::ceil(threshold_k0(n))) + 1; }

}  // namespace koutcube
