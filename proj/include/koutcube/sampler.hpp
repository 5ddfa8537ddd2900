#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "koutcube/graph.hpp"
#include "koutcube/hypercube.hpp"
#include "koutcube/rng.hpp"

namespace koutcube {

// Per-vertex chosen direction sets with no constraint on their sizes; the
// common currency between the k-out sample and its partial extensions.
struct ChoiceMap {
  Dimension n;
  std::vector<DirectionMask> masks;

  explicit ChoiceMap(Dimension dim) : n(dim), masks(dim.vertex_count(), 0) {}
  ChoiceMap(Dimension dim, std::vector<DirectionMask> m);

  CubeGraph undirected() const { return CubeGraph::from_choices(n, masks); }
  friend bool operator==(const ChoiceMap&, const ChoiceMap&) = default;
};

// Q^n(k): every vertex holds exactly k distinct chosen directions.
class KOutSample {
 public:
  // Validates popcount(choice) == k for every vertex.
  KOutSample(int k, ChoiceMap choices);

  Dimension n() const noexcept { return choices_.n; }
  int k() const noexcept { return k_; }
  const ChoiceMap& choices() const noexcept { return choices_; }
  DirectionMask choice(VertexId v) const noexcept { return choices_.masks[v]; }

  friend bool operator==(const KOutSample&, const KOutSample&) = default;

 private:
  int k_;
  ChoiceMap choices_;
};

// The k = 1 digraph: each vertex v points to f(v) = v xor 2^dir[v].
class FunctionalMap {
 public:
  FunctionalMap(Dimension n, std::vector<std::uint8_t> directions);

  Dimension n() const noexcept { return n_; }
  int direction(VertexId v) const noexcept { return dir_[v]; }
  VertexId target(VertexId v) const noexcept { return flip(v, dir_[v]); }
  std::span<const std::uint8_t> directions() const noexcept { return dir_; }

  KOutSample as_sample() const;

 private:
  Dimension n_;
  std::vector<std::uint8_t> dir_;
};

// Three-phase construction: G0 ~ Q^n(k-1); phase 1 gives active vertices
// their k-th direction (G1); phase 2 gives it to every other vertex (G2).
class StagedSample {
 public:
  StagedSample(KOutSample g0, std::vector<DirectionMask> extra, std::vector<std::uint8_t> active);

  int k() const noexcept { return g0_.k() + 1; }
  Dimension n() const noexcept { return g0_.n(); }
  const KOutSample& g0() const noexcept { return g0_; }
  ChoiceMap g1() const;
  KOutSample g2() const;

  bool is_active(VertexId v) const noexcept { return active_[v] != 0; }
  std::uint64_t active_count() const noexcept;
  // The single-bit k-th direction of v.
  DirectionMask extra(VertexId v) const noexcept { return extra_[v]; }

 private:
  KOutSample g0_;
  std::vector<DirectionMask> extra_;
  std::vector<std::uint8_t> active_;
};

// Selects the phase-1 vertices from G0; must depend on G0 only.
using ActivePredicate = std::function<std::vector<std::uint8_t>(const KOutSample& g0)>;

ActivePredicate all_active();
ActivePredicate none_active();

// Each vertex independently draws a uniform k-subset of [0, n).
KOutSample sample_kout(Dimension n, int k, Seed seed);

// Each vertex independently draws one uniform direction.
FunctionalMap sample_one_out(Dimension n, Seed seed);

// Every vertex of the given parity class gains one direction drawn uniformly
// from those it has not chosen; the other class is untouched.
ChoiceMap extend_half(const ChoiceMap& base, int parity, Seed seed);

// Undirected view of a sample.
CubeGraph as_undirected(const KOutSample& sample);

StagedSample staged_sample(Dimension n, int k, const ActivePredicate& active, Seed seed);

// Binary dump: "KOUTCUBE" magic, u32 n, u32 k, u64 seed, then 2^n u32 choice
// masks; all integers little-endian.
void write_sample(std::ostream& out, const KOutSample& sample, std::uint64_t seed);

struct LoadedSample {
  KOutSample sample;
  std::uint64_t seed;
};
LoadedSample read_sample(std::istream& in);

}  // namespace koutcube
