#include "koutcube/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace koutcube::kernels {

namespace {

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{default_isa()};
  return slot;
}

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw InvalidParameter(std::string("kernel span length mismatch: ") + what);
}

}  // namespace

std::string_view name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
      return false;
#endif
  }
  return false;
}

Isa default_isa() noexcept {
  if (const char* forced = std::getenv("KOUTCUBE_ISA")) {
    const std::string_view value(forced);
    if (value == "scalar") return Isa::scalar;
    if (value == "avx2" && supported(Isa::avx2)) return Isa::avx2;
  }
  return supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

Isa active() noexcept { return active_slot().load(std::memory_order_relaxed); }

void set_active(Isa isa) {
  if (!supported(isa)) {
    throw InvalidParameter("instruction set " + std::string(name(isa)) + " not supported");
  }
  active_slot().store(isa, std::memory_order_relaxed);
}

void adjacency_masks(std::span<const DirectionMask> choices, int n,
                     std::span<DirectionMask> adjacency) {
  const std::size_t count = std::size_t{1} << n;
  check_lengths(choices.size(), count, "choices");
  check_lengths(adjacency.size(), count, "adjacency");
  if (active() == Isa::avx2) {
    avx2::adjacency_masks(choices, n, adjacency);
  } else {
    scalar::adjacency_masks(choices, n, adjacency);
  }
}

void degree_histogram(std::span<const DirectionMask> adjacency, DegreeHistogram& histogram) {
  if (active() == Isa::avx2) {
    avx2::degree_histogram(adjacency, histogram);
  } else {
    scalar::degree_histogram(adjacency, histogram);
  }
}

void walk_step(std::span<const double> in, std::span<const double> up,
               std::span<const double> down, std::span<double> out) {
  check_lengths(up.size(), in.size(), "up");
  check_lengths(down.size(), in.size(), "down");
  check_lengths(out.size(), in.size(), "out");
  if (active() == Isa::avx2) {
    avx2::walk_step(in, up, down, out);
  } else {
    scalar::walk_step(in, up, down, out);
  }
}

}  // namespace koutcube::kernels
