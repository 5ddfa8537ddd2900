#pragma once

// Data-parallel inner loops. Each kernel has a portable scalar reference and
// an AVX2 variant; the public entry points dispatch at runtime to the best
// instruction set the CPU supports. Variants are bit-for-bit equivalent.

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "koutcube/hypercube.hpp"

namespace koutcube::kernels {

enum class Isa { scalar, avx2 };

std::string_view name(Isa isa) noexcept;
bool supported(Isa isa) noexcept;
// Honors KOUTCUBE_ISA=scalar|avx2 when set, otherwise the best supported.
Isa default_isa() noexcept;
Isa active() noexcept;
// Throws InvalidParameter when the CPU lacks `isa`.
void set_active(Isa isa);

using DegreeHistogram = std::array<std::uint64_t, kMaxDimension + 1>;

// adjacency[v] = choices[v] | (inbound choices of v): bit d is set iff v or
// v xor 2^d chose direction d. Spans have length 2^n.
void adjacency_masks(std::span<const DirectionMask> choices, int n,
                     std::span<DirectionMask> adjacency);

// histogram[d] += number of masks with popcount d.
void degree_histogram(std::span<const DirectionMask> adjacency, DegreeHistogram& histogram);

// One forward step of the birth-death chain on {0..n}:
//   out[s] = in[s-1] * up[s-1] + in[s+1] * down[s+1]
// with out-of-range terms equal to zero. All spans have length n + 1.
void walk_step(std::span<const double> in, std::span<const double> up,
               std::span<const double> down, std::span<double> out);

namespace scalar {
void adjacency_masks(std::span<const DirectionMask> choices, int n,
                     std::span<DirectionMask> adjacency);
void degree_histogram(std::span<const DirectionMask> adjacency, DegreeHistogram& histogram);
void walk_step(std::span<const double> in, std::span<const double> up,
               std::span<const double> down, std::span<double> out);
}  // namespace scalar

namespace avx2 {
void adjacency_masks(std::span<const DirectionMask> choices, int n,
                     std::span<DirectionMask> adjacency);
void degree_histogram(std::span<const DirectionMask> adjacency, DegreeHistogram& histogram);
void walk_step(std::span<const double> in, std::span<const double> up,
               std::span<const double> down, std::span<double> out);
}  // namespace avx2

}  // namespace koutcube::kernels
