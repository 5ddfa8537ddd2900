#include <bit>

#include "koutcube/kernels.hpp"

namespace koutcube::kernels::scalar {

void adjacency_masks(std::span<const DirectionMask> choices, int n,
                     std::span<DirectionMask> adjacency) {
  const std::size_t count = std::size_t{1} << n;
  for (std::size_t v = 0; v < count; ++v) {
    DirectionMask acc = choices[v];
    for (int d = 0; d < n; ++d) {
      const DirectionMask bit = DirectionMask{1} << d;
      acc |= choices[v ^ bit] & bit;
    }
    adjacency[v] = acc;
  }
}

void degree_histogram(std::span<const DirectionMask> adjacency, DegreeHistogram& histogram) {
  for (DirectionMask m : adjacency) ++histogram[static_cast<std::size_t>(std::popcount(m))];
}

void walk_step(std::span<const double> in, std::span<const double> up,
               std::span<const double> down, std::span<double> out) {
  const std::size_t states = in.size();
  for (std::size_t s = 0; s < states; ++s) {
    const double from_below = s >= 1 ? in[s - 1] * up[s - 1] : 0.0;
    const double from_above = s + 1 < states ? in[s + 1] * down[s + 1] : 0.0;
    out[s] = from_below + from_above;
  }
}

}  // namespace koutcube::kernels::scalar
