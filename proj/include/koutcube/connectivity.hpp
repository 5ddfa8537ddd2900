#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "koutcube/graph.hpp"
#include "koutcube/kernels.hpp"
#include "koutcube/sampler.hpp"
#include "koutcube/structure.hpp"

namespace koutcube {

template <AdjacencyOracle G>
bool is_connected(const G& g) {
  return components(g).count == 1;
}

struct DegreeCensus {
  kernels::DegreeHistogram histogram{};  // degree -> vertex count
  int k = 0;
  std::uint64_t degree_k_count = 0;
  int min_degree = 0;
  int max_degree = 0;

  std::map<int, std::uint64_t> as_map() const;
};

DegreeCensus degree_census(const CubeGraph& g, int k);
DegreeCensus degree_census(const KOutSample& sample);

// Flow computations refuse graphs above this many vertices.
inline constexpr std::uint64_t kMaxFlowVertices = 4096;

// Maximum number of internally vertex-disjoint s-t paths between two
// distinct non-adjacent vertices, stopping early once `limit` is reached.
int local_connectivity(const SimpleGraph& g, VertexId s, VertexId t, int limit);

// min(kappa(G), ceiling). Uses Menger's theorem with unit-capacity vertex
// splitting and Dinic augmentation: a min-degree vertex s is flowed to every
// non-neighbor, then every non-adjacent pair of neighbors of s is tried.
// A complete graph on m vertices has kappa = m - 1; a disconnected one 0.
int vertex_connectivity(const SimpleGraph& g, int ceiling);
int vertex_connectivity(const CubeGraph& g, int ceiling);

// Components of the sample minus L: exactly the minimal L-disconnected sets.
// The partition property (disjoint, connected, covering V \ L, no edge
// leaving S except into L) is verified on every call.
struct DisconnectionCensus {
  std::vector<VertexId> removal;                // L, sorted
  std::vector<std::vector<VertexId>> sets;      // ordered by smallest vertex

  bool contains_set(std::span<const VertexId> s) const;
};

DisconnectionCensus minimal_disconnected_sets(const CubeGraph& g, std::span<const VertexId> removal);

// A certificate that v lies in a small minimal L-disconnected set of G0.
struct ActiveWitness {
  std::vector<VertexId> set;      // S, sorted, connected in G0
  std::vector<VertexId> removal;  // L, sorted, |L| = k - 1, contains N(S)
};

struct ActiveSetReport {
  int cap = 0;
  int removal_size = 0;                 // k - 1
  std::vector<std::uint8_t> active;     // per vertex
  std::vector<std::uint32_t> witness_of;  // per vertex index into witnesses, or kNoWitness
  std::vector<ActiveWitness> witnesses;

  static constexpr std::uint32_t kNoWitness = 0xffffffffU;
  std::uint64_t count() const noexcept;
};

inline constexpr int kDefaultActiveCap = 8;
inline constexpr int kMaxActiveCap = 12;

// v is active iff some S containing v, connected in G0 with |S| <= cap, has
// at most k - 1 = g0.k() outside neighbors in G0. Every connected set of
// size <= cap is enumerated once (ESU); refuses caps above 12.
ActiveSetReport active_set(const KOutSample& g0, int cap = kDefaultActiveCap);

ActivePredicate active_set_predicate(int cap = kDefaultActiveCap);

// Components whose vertex set is exactly a proper subcube and whose members
// choose only directions inside it, in order of their smallest vertex. A
// connected sample yields an empty list.
std::vector<SubcubeSpec> subcube_component_scan(const KOutSample& sample);

// A k-out sample in which the given k-dimensional subcube is a component:
// its vertices choose exactly its k internal directions, every outer boundary
// vertex draws its k directions uniformly from the n - 1 that do not point
// inward, and all remaining vertices draw as in sample_kout(n, k, seed).
KOutSample plant_subcube_component(Dimension n, int k, const SubcubeSpec& spec, Seed seed);

// log2 n - 2 log2 log2 n in double precision; defined for n >= 2.
double threshold_k0(int n);
// ceil(k0) + 1.
int threshold_k1(int n);

}  // namespace koutcube
