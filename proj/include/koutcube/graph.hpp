#pragma once

#include <bit>
#include <concepts>
#include <cstdint>
#include <span>
#include <vector>

#include "koutcube/hypercube.hpp"

namespace koutcube {

// Anything the structural analyses can walk: a vertex count and a neighbor
// visitor. Neighbors may be reported in any order but without duplicates.
template <class G>
concept AdjacencyOracle = requires(const G& g, VertexId v) {
  { g.vertex_count() } -> std::convertible_to<std::uint64_t>;
  g.for_each_neighbor(v, [](VertexId) {});
};

// Undirected spanning subgraph of Q^n held as one adjacency bitmask per
// vertex; edge v -- v^2^d is present iff bit d of mask[v] is set. Masks are
// kept symmetric by construction.
class CubeGraph {
 public:
  // Undirected view of per-vertex choice sets: an edge is present iff at
  // least one endpoint chose it.
  static CubeGraph from_choices(Dimension n, std::span<const DirectionMask> choices);
  static CubeGraph full(Dimension n);

  Dimension dimension() const noexcept { return n_; }
  std::uint64_t vertex_count() const noexcept { return n_.vertex_count(); }
  DirectionMask adjacency(VertexId v) const noexcept { return masks_[v]; }
  std::span<const DirectionMask> masks() const noexcept { return masks_; }
  bool has_edge(VertexId v, int direction) const noexcept {
    return (masks_[v] >> direction) & 1U;
  }
  int degree(VertexId v) const noexcept { return std::popcount(masks_[v]); }
  std::uint64_t edge_count() const noexcept;

  template <class F>
  void for_each_neighbor(VertexId v, F&& f) const {
    for (DirectionMask m = masks_[v]; m != 0; m &= m - 1) f(flip(v, std::countr_zero(m)));
  }

 private:
  CubeGraph(Dimension n, std::vector<DirectionMask> masks) : n_(n), masks_(std::move(masks)) {}

  Dimension n_;
  std::vector<DirectionMask> masks_;
};

// Small general graph on vertices [0, count) with adjacency lists. Used for
// toy oracles and for flow computations on cube samples.
class SimpleGraph {
 public:
  explicit SimpleGraph(std::uint64_t vertex_count) : adjacency_(vertex_count) {}
  static SimpleGraph from(const CubeGraph& g);

  std::uint64_t vertex_count() const noexcept { return adjacency_.size(); }
  // Ignores self-loops and repeated edges.
  void add_edge(VertexId u, VertexId v);
  bool has_edge(VertexId u, VertexId v) const;
  int degree(VertexId v) const noexcept { return static_cast<int>(adjacency_[v].size()); }
  std::span<const VertexId> neighbors(VertexId v) const noexcept { return adjacency_[v]; }

  template <class F>
  void for_each_neighbor(VertexId v, F&& f) const {
    for (VertexId w : adjacency_[v]) f(w);
  }

 private:
  std::vector<std::vector<VertexId>> adjacency_;
};

static_assert(AdjacencyOracle<CubeGraph>);
static_assert(AdjacencyOracle<SimpleGraph>);

}  // namespace koutcube
