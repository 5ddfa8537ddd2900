#include "koutcube/hypercube.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace koutcube {

namespace {

std::vector<bool> membership(std::span<const VertexId> set, Dimension n) {
  std::vector<bool> in(n.vertex_count(), false);
  for (VertexId v : set) {
    if (!n.contains(v)) {
      throw InvalidParameter("vertex " + std::to_string(v) + " outside the cube");
    }
    in[v] = true;
  }
  return in;
}

DirectionMask mask_of(std::span<const int> coords, Dimension n) {
  DirectionMask m = 0;
  for (int c : coords) {
    if (c < 0 || c >= n.value()) {
      throw InvalidSpec("coordinate " + std::to_string(c) + " outside [0, n)");
    }
    if (m & (DirectionMask{1} << c)) {
      throw InvalidSpec("coordinate " + std::to_string(c) + " listed twice");
    }
    m |= DirectionMask{1} << c;
  }
  return m;
}

}  // namespace

std::vector<VertexId> neighbors(VertexId v, Dimension n) {
  std::vector<VertexId> out;
  out.reserve(static_cast<std::size_t>(n.value()));
  for (int d = 0; d < n.value(); ++d) out.push_back(flip(v, d));
  return out;
}

std::uint64_t edge_count(std::span<const VertexId> a, std::span<const VertexId> b, Dimension n) {
  const auto in_a = membership(a, n);
  const auto in_b = membership(b, n);
  std::uint64_t count = 0;
  for (VertexId v = 0; v < n.vertex_count(); ++v) {
    if (!in_a[v]) continue;
    for (int d = 0; d < n.value(); ++d) {
      const VertexId w = flip(v, d);
      if (!in_b[w]) continue;
      // The same unordered edge is also reachable as (w, v) when w in A and
      // v in B; count it only from the smaller endpoint then.
      if (in_a[w] && in_b[v] && w < v) continue;
      ++count;
    }
  }
  return count;
}

double iso_lower_bound(Dimension n, std::uint64_t s) {
  if (s < 1 || s > n.vertex_count()) {
    throw InvalidParameter("set size must be in [1, 2^n]");
  }
  const double x = static_cast<double>(s);
  return n.value() * x - x * std::log2(x);
}

double iso_interval_bound(Dimension n, std::uint64_t a, std::uint64_t b) {
  if (a > b) throw InvalidParameter("interval endpoints out of order");
  return std::min(iso_lower_bound(n, a), iso_lower_bound(n, b));
}

SubcubeSpec SubcubeSpec::from_coordinates(Dimension n, std::span<const int> ones,
                                          std::span<const int> free,
                                          std::span<const int> zeros) {
  SubcubeSpec spec{mask_of(ones, n), mask_of(free, n), mask_of(zeros, n)};
  spec.validate(n);
  return spec;
}

void SubcubeSpec::validate(Dimension n) const {
  const DirectionMask full = n.full_mask();
  if ((ones & free) || (ones & zeros) || (free & zeros)) {
    throw InvalidSpec("subcube coordinate sets overlap");
  }
  if ((ones | free | zeros) != full) {
    throw InvalidSpec("subcube coordinate sets do not cover [0, n)");
  }
}

std::vector<VertexId> subcube_vertices(const SubcubeSpec& spec, Dimension n) {
  spec.validate(n);
  std::vector<VertexId> out;
  out.reserve(spec.vertex_count());
  // Enumerate submasks of `free` in increasing order.
  DirectionMask sub = 0;
  do {
    out.push_back(spec.ones | sub);
    sub = (sub - spec.free) & spec.free;
  } while (sub != 0);
  return out;
}

std::vector<VertexId> subcube_outer_boundary(const SubcubeSpec& spec, Dimension n) {
  const auto inside = subcube_vertices(spec, n);
  const DirectionMask fixed = spec.ones | spec.zeros;
  std::vector<VertexId> out;
  out.reserve(inside.size() * static_cast<std::size_t>(std::popcount(fixed)));
  for (VertexId v : inside) {
    for (int d = 0; d < n.value(); ++d) {
      if (fixed & (DirectionMask{1} << d)) out.push_back(flip(v, d));
    }
  }
  return out;
}

}  // namespace koutcube
