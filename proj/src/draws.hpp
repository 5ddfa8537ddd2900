#pragma once

#include <bit>

#include "koutcube/hypercube.hpp"
#include "koutcube/rng.hpp"

namespace koutcube::detail {

// Floyd's algorithm: uniform k-subset of [0, n) in k draws.
inline DirectionMask random_subset(StreamRng& rng, int n, int k) {
  DirectionMask chosen = 0;
  for (int j = n - k; j < n; ++j) {
    const auto t = static_cast<int>(rng.below(static_cast<std::uint32_t>(j + 1)));
    const DirectionMask bit_t = DirectionMask{1} << t;
    chosen |= (chosen & bit_t) ? (DirectionMask{1} << j) : bit_t;
  }
  return chosen;
}

// Uniform element of a non-empty mask, returned as a single-bit mask.
inline DirectionMask random_member(StreamRng& rng, DirectionMask allowed) {
  auto r = rng.below(static_cast<std::uint32_t>(std::popcount(allowed)));
  DirectionMask m = allowed;
  while (r-- > 0) m &= m - 1;
  return m & (~m + 1);
}

// Uniform k-subset of the set bits of `allowed` (k <= popcount(allowed)).
inline DirectionMask random_subset_of(StreamRng& rng, DirectionMask allowed, int k) {
  const int width = std::popcount(allowed);
  const DirectionMask picked = random_subset(rng, width, k);
  // Scatter the picked ranks onto the allowed positions.
  DirectionMask out = 0;
  int rank = 0;
  for (DirectionMask m = allowed; m != 0; m &= m - 1, ++rank) {
    if ((picked >> rank) & 1U) out |= m & (~m + 1);
  }
  return out;
}

}  // namespace koutcube::detail
