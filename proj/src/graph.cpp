#include "koutcube/graph.hpp"

#include <algorithm>
#include <numeric>

#include "koutcube/kernels.hpp"

namespace koutcube {

CubeGraph CubeGraph::from_choices(Dimension n, std::span<const DirectionMask> choices) {
  std::vector<DirectionMask> masks(n.vertex_count());
  kernels::adjacency_masks(choices, n.value(), masks);
  return CubeGraph(n, std::move(masks));
}

CubeGraph CubeGraph::full(Dimension n) {
  return CubeGraph(n, std::vector<DirectionMask>(n.vertex_count(), n.full_mask()));
}

std::uint64_t CubeGraph::edge_count() const noexcept {
  std::uint64_t twice = 0;
  for (DirectionMask m : masks_) twice += static_cast<std::uint64_t>(std::popcount(m));
  return twice / 2;
}

SimpleGraph SimpleGraph::from(const CubeGraph& g) {
  SimpleGraph out(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    g.for_each_neighbor(v, [&](VertexId w) { out.adjacency_[v].push_back(w); });
  }
  return out;
}

void SimpleGraph::add_edge(VertexId u, VertexId v) {
  if (u >= vertex_count() || v >= vertex_count()) {
    throw InvalidParameter("edge endpoint out of range");
  }
  if (u == v || has_edge(u, v)) return;
  adjacency_[u].push_back(v);
  adjacency_[v].push_back(u);
}

bool SimpleGraph::has_edge(VertexId u, VertexId v) const {
  const auto& a = adjacency_[u];
  return std::find(a.begin(), a.end(), v) != a.end();
}

}  // namespace koutcube
