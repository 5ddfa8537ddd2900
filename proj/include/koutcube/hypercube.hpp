#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "koutcube/errors.hpp"

namespace koutcube {

// Vertex ids are raw bit-strings: coordinate i of the cube is bit i of the id.
using VertexId = std::uint32_t;
// One bit per direction; n <= 30 always fits.
using DirectionMask = std::uint32_t;

inline constexpr int kMaxDimension = 30;

class Dimension {
 public:
  constexpr explicit Dimension(int n) : n_(n) {
    if (n < 1 || n > kMaxDimension) {
      throw InvalidParameter("dimension must be in [1, 30], got " + std::to_string(n));
    }
  }

  constexpr int value() const noexcept { return n_; }
  constexpr std::uint64_t vertex_count() const noexcept { return std::uint64_t{1} << n_; }
  constexpr DirectionMask full_mask() const noexcept {
    return static_cast<DirectionMask>((std::uint64_t{1} << n_) - 1);
  }
  constexpr bool contains(VertexId v) const noexcept { return v < vertex_count(); }

  friend constexpr bool operator==(Dimension, Dimension) = default;

 private:
  int n_;
};

constexpr VertexId flip(VertexId v, int direction) noexcept {
  return v ^ (VertexId{1} << direction);
}

constexpr int parity_class(VertexId v) noexcept { return std::popcount(v) & 1; }

// Canonical edge coding: the endpoint with bit `direction` cleared is the base.
struct EdgeId {
  VertexId base = 0;
  int direction = 0;

  static constexpr EdgeId between(VertexId v, int direction) noexcept {
    return EdgeId{v & ~(VertexId{1} << direction), direction};
  }
  constexpr VertexId tip() const noexcept { return flip(base, direction); }

  friend constexpr bool operator==(const EdgeId&, const EdgeId&) = default;
};

// {v xor 2^i : i in [0, n)}, in increasing direction order.
std::vector<VertexId> neighbors(VertexId v, Dimension n);

// Number of cube edges vw with v in A and w in B, each unordered edge counted
// once. For A = B this is d(A, A); for disjoint sets it counts crossings, and
// d(A, V \ A) = n|A| - 2 d(A, A) holds.
std::uint64_t edge_count(std::span<const VertexId> a, std::span<const VertexId> b, Dimension n);

// n*s - s*log2(s): the lower bound on d(A, V \ A) for |A| = s.
double iso_lower_bound(Dimension n, std::uint64_t s);

// min{f(a), f(b)} with f(x) = n x - x log2 x; bounds d(A, V \ A) for every
// |A| in [a, b] since f is unimodal.
double iso_interval_bound(Dimension n, std::uint64_t a, std::uint64_t b);

// A subcube: coordinates in `ones` fixed to 1, in `zeros` fixed to 0, the
// rest free. The three masks must partition [0, n).
struct SubcubeSpec {
  DirectionMask ones = 0;
  DirectionMask free = 0;
  DirectionMask zeros = 0;

  static SubcubeSpec from_coordinates(Dimension n, std::span<const int> ones,
                                      std::span<const int> free, std::span<const int> zeros);

  void validate(Dimension n) const;
  int level() const noexcept { return std::popcount(ones); }
  int free_count() const noexcept { return std::popcount(free); }
  std::uint64_t vertex_count() const noexcept { return std::uint64_t{1} << free_count(); }
  bool contains(VertexId v) const noexcept { return (v & ~free) == ones; }

  friend bool operator==(const SubcubeSpec&, const SubcubeSpec&) = default;
};

// Vertices of the subcube in increasing order of their free-coordinate pattern.
std::vector<VertexId> subcube_vertices(const SubcubeSpec& spec, Dimension n);

// N(V_H): vertices outside the subcube adjacent to it. Each has exactly one
// neighbor inside, so the result has 2^|free| (n - |free|) distinct entries.
std::vector<VertexId> subcube_outer_boundary(const SubcubeSpec& spec, Dimension n);

}  // namespace koutcube
