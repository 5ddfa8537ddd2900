#pragma once

#include <bit>
#include <cstdint>
#include <limits>

namespace koutcube {

// A reproducible seed. `trial` selects an independent replicate under the
// same master seed; per-vertex streams are derived from both, never shared.
struct Seed {
  std::uint64_t master = 0;
  std::uint64_t trial = 0;

  friend constexpr bool operator==(const Seed&, const Seed&) = default;
};

// Distinguishes the independent random draws made for one (seed, vertex).
enum class StreamTag : std::uint64_t {
  kout = 1,
  one_out = 2,
  extend_half = 3,
  staged_extra = 4,
  plant = 5,
  walk = 6,
  subsets = 7,
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t value) noexcept {
  return mix64(h ^ mix64(value + 0x632be59bd9b4e019ULL));
}

// SplitMix64 stream; models UniformRandomBitGenerator.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  constexpr explicit StreamRng(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, bound) without modulo bias (Lemire's multiply-shift with
  // rejection). Kept here rather than std::uniform_int_distribution so that
  // sample bits do not depend on the standard library vendor.
  constexpr std::uint32_t below(std::uint32_t bound) noexcept {
    std::uint64_t m = static_cast<std::uint64_t>(next32()) * bound;
    auto low = static_cast<std::uint32_t>(m);
    if (low < bound) {
      const std::uint32_t threshold = static_cast<std::uint32_t>(-bound) % bound;
      while (low < threshold) {
        m = static_cast<std::uint64_t>(next32()) * bound;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  // Uniform on [0, 1) with 53 random bits.
  constexpr double unit() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  constexpr std::uint32_t next32() noexcept { return static_cast<std::uint32_t>((*this)() >> 32); }

  std::uint64_t state_;
};

constexpr StreamRng make_stream(Seed seed, StreamTag tag, std::uint64_t index) noexcept {
  std::uint64_t h = mix64(seed.master);
  h = combine(h, seed.trial);
  h = combine(h, static_cast<std::uint64_t>(tag));
  h = combine(h, index);
  return StreamRng(h);
}

}  // namespace koutcube
