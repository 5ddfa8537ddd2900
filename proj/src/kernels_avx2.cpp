#include "koutcube/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#define KOUTCUBE_AVX2 __attribute__((target("avx2,popcnt")))

namespace koutcube::kernels::avx2 {

KOUTCUBE_AVX2 void adjacency_masks(std::span<const DirectionMask> choices, int n,
                     std::span<DirectionMask> adjacency) {
  if (n < 3) {
    scalar::adjacency_masks(choices, n, adjacency);
    return;
  }
  const std::size_t count = std::size_t{1} << n;
  const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  const auto* src = choices.data();
  auto* dst = adjacency.data();

  for (std::size_t base = 0; base < count; base += 8) {
    const __m256i own = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + base));
    __m256i acc = own;
    // Partners along directions 0..2 live in the same 8-vertex block.
    for (int d = 0; d < 3; ++d) {
      const __m256i bit = _mm256_set1_epi32(1 << d);
      const __m256i partner = _mm256_permutevar8x32_epi32(own, _mm256_xor_si256(lane, bit));
      acc = _mm256_or_si256(acc, _mm256_and_si256(partner, bit));
    }
    for (int d = 3; d < n; ++d) {
      const __m256i bit = _mm256_set1_epi32(1 << d);
      const std::size_t other = base ^ (std::size_t{1} << d);
      const __m256i partner = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + other));
      acc = _mm256_or_si256(acc, _mm256_and_si256(partner, bit));
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + base), acc);
  }
}

KOUTCUBE_AVX2 void degree_histogram(std::span<const DirectionMask> adjacency,
                                    DegreeHistogram& histogram) {
  const std::size_t count = adjacency.size();
  const std::size_t body = count - count % 8;
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_nibble = _mm256_set1_epi8(0x0f);
  const __m256i ones8 = _mm256_set1_epi8(1);
  const __m256i ones16 = _mm256_set1_epi16(1);
  alignas(32) std::uint32_t lanes[8];

  for (std::size_t i = 0; i < body; i += 8) {
    const __m256i x =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(adjacency.data() + i));
    const __m256i lo = _mm256_and_si256(x, low_nibble);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(x, 4), low_nibble);
    const __m256i per_byte =
        _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
    const __m256i per_word = _mm256_maddubs_epi16(per_byte, ones8);
    const __m256i per_lane = _mm256_madd_epi16(per_word, ones16);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), per_lane);
    for (std::uint32_t c : lanes) ++histogram[c];
  }
  scalar::degree_histogram(adjacency.subspan(body), histogram);
}

KOUTCUBE_AVX2 void walk_step(std::span<const double> in, std::span<const double> up,
               std::span<const double> down, std::span<double> out) {
  const std::size_t states = in.size();
  if (states < 6) {
    scalar::walk_step(in, up, down, out);
    return;
  }
  // Interior states 1..states-2 have both neighbours; the two boundary
  // states follow the scalar formula with an explicit zero term.
  out[0] = 0.0 + in[1] * down[1];
  std::size_t s = 1;
  for (; s + 4 <= states - 1; s += 4) {
    const __m256d below = _mm256_mul_pd(_mm256_loadu_pd(&in[s - 1]), _mm256_loadu_pd(&up[s - 1]));
    const __m256d above =
        _mm256_mul_pd(_mm256_loadu_pd(&in[s + 1]), _mm256_loadu_pd(&down[s + 1]));
    _mm256_storeu_pd(&out[s], _mm256_add_pd(below, above));
  }
  for (; s + 1 < states; ++s) out[s] = in[s - 1] * up[s - 1] + in[s + 1] * down[s + 1];
  out[states - 1] = in[states - 2] * up[states - 2] + 0.0;
}

}  // namespace koutcube::kernels::avx2

#else

// Non-x86 builds: supported(Isa::avx2) is false, so these are never selected.
namespace koutcube::kernels::avx2 {

void adjacency_masks(std::span<const DirectionMask> choices, int n,
                     std::span<DirectionMask> adjacency) {
  scalar::adjacency_masks(choices, n, adjacency);
}

void degree_histogram(std::span<const DirectionMask> adjacency, DegreeHistogram& histogram) {
  scalar::degree_histogram(adjacency, histogram);
}

void walk_step(std::span<const double> in, std::span<const double> up,
               std::span<const double> down, std::span<double> out) {
  scalar::walk_step(in, up, down, out);
}

}  // namespace koutcube::kernels::avx2

#endif
