#include "koutcube/sampler.hpp"

#include <array>
#include <bit>
#include <istream>
#include <ostream>
#include <string>

#include "draws.hpp"

namespace koutcube {

namespace {

using detail::random_member;
using detail::random_subset;

void put_u32(std::ostream& out, std::uint32_t x) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

void put_u64(std::ostream& out, std::uint64_t x) {
  put_u32(out, static_cast<std::uint32_t>(x));
  put_u32(out, static_cast<std::uint32_t>(x >> 32));
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) {
    throw FormatError("truncated sample file");
  }
  return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) | (std::uint32_t{b[2]} << 16) |
         (std::uint32_t{b[3]} << 24);
}

std::uint64_t get_u64(std::istream& in) {
  const std::uint64_t lo = get_u32(in);
  const std::uint64_t hi = get_u32(in);
  return lo | (hi << 32);
}

constexpr std::string_view kMagic = "KOUTCUBE";

void check_k(Dimension n, int k, int lowest) {
  if (k < lowest || k > n.value()) {
    throw InvalidParameter("k must be in [" + std::to_string(lowest) + ", n], got " +
                           std::to_string(k));
  }
}

}  // namespace

ChoiceMap::ChoiceMap(Dimension dim, std::vector<DirectionMask> m) : n(dim), masks(std::move(m)) {
  if (masks.size() != n.vertex_count()) {
    throw InvalidParameter("choice map must have 2^n entries");
  }
  const DirectionMask outside = ~n.full_mask();
  for (DirectionMask c : masks) {
    if (c & outside) throw InvalidParameter("choice mask names a direction >= n");
  }
}

KOutSample::KOutSample(int k, ChoiceMap choices) : k_(k), choices_(std::move(choices)) {
  check_k(choices_.n, k, 1);
  for (DirectionMask c : choices_.masks) {
    if (std::popcount(c) != k) {
      throw InvalidParameter("every vertex of a k-out sample must choose exactly k directions");
    }
  }
}

FunctionalMap::FunctionalMap(Dimension n, std::vector<std::uint8_t> directions)
    : n_(n), dir_(std::move(directions)) {
  if (dir_.size() != n.vertex_count()) {
    throw InvalidParameter("functional map must have 2^n entries");
  }
  for (auto d : dir_) {
    if (d >= n.value()) throw InvalidParameter("direction out of range");
  }
}

KOutSample FunctionalMap::as_sample() const {
  ChoiceMap map(n_);
  for (std::size_t v = 0; v < dir_.size(); ++v) map.masks[v] = DirectionMask{1} << dir_[v];
  return KOutSample(1, std::move(map));
}

StagedSample::StagedSample(KOutSample g0, std::vector<DirectionMask> extra,
                           std::vector<std::uint8_t> active)
    : g0_(std::move(g0)), extra_(std::move(extra)), active_(std::move(active)) {
  const auto count = g0_.n().vertex_count();
  if (extra_.size() != count || active_.size() != count) {
    throw InvalidParameter("staged sample arrays must have 2^n entries");
  }
  for (std::size_t v = 0; v < count; ++v) {
    if (std::popcount(extra_[v]) != 1 || (extra_[v] & g0_.choice(static_cast<VertexId>(v)))) {
      throw InvalidParameter("extra direction must be one direction outside E0(v)");
    }
  }
}

ChoiceMap StagedSample::g1() const {
  ChoiceMap map = g0_.choices();
  for (std::size_t v = 0; v < map.masks.size(); ++v) {
    if (active_[v]) map.masks[v] |= extra_[v];
  }
  return map;
}

KOutSample StagedSample::g2() const {
  ChoiceMap map = g0_.choices();
  for (std::size_t v = 0; v < map.masks.size(); ++v) map.masks[v] |= extra_[v];
  return KOutSample(k(), std::move(map));
}

std::uint64_t StagedSample::active_count() const noexcept {
  std::uint64_t c = 0;
  for (auto a : active_) c += a != 0;
  return c;
}

ActivePredicate all_active() {
  return [](const KOutSample& g0) {
    return std::vector<std::uint8_t>(g0.n().vertex_count(), 1);
  };
}

ActivePredicate none_active() {
  return [](const KOutSample& g0) {
    return std::vector<std::uint8_t>(g0.n().vertex_count(), 0);
  };
}

KOutSample sample_kout(Dimension n, int k, Seed seed) {
  check_k(n, k, 1);
  ChoiceMap map(n);
  for (std::uint64_t v = 0; v < map.masks.size(); ++v) {
    auto rng = make_stream(seed, StreamTag::kout, v);
    map.masks[v] = random_subset(rng, n.value(), k);
  }
  return KOutSample(k, std::move(map));
}

FunctionalMap sample_one_out(Dimension n, Seed seed) {
  std::vector<std::uint8_t> dir(n.vertex_count());
  for (std::uint64_t v = 0; v < dir.size(); ++v) {
    auto rng = make_stream(seed, StreamTag::one_out, v);
    dir[v] = static_cast<std::uint8_t>(rng.below(static_cast<std::uint32_t>(n.value())));
  }
  return FunctionalMap(n, std::move(dir));
}

ChoiceMap extend_half(const ChoiceMap& base, int parity, Seed seed) {
  if (parity != 0 && parity != 1) throw InvalidParameter("parity class must be 0 or 1");
  const DirectionMask full = base.n.full_mask();
  ChoiceMap out = base;
  for (std::uint64_t v = 0; v < out.masks.size(); ++v) {
    if (parity_class(static_cast<VertexId>(v)) != parity) continue;
    const DirectionMask free = full & ~out.masks[v];
    if (free == 0) throw NoRoom("vertex has already chosen all n directions");
    auto rng = make_stream(seed, StreamTag::extend_half, v);
    out.masks[v] |= random_member(rng, free);
  }
  return out;
}

CubeGraph as_undirected(const KOutSample& sample) { return sample.choices().undirected(); }

StagedSample staged_sample(Dimension n, int k, const ActivePredicate& active, Seed seed) {
  check_k(n, k, 2);
  KOutSample g0 = sample_kout(n, k - 1, seed);
  std::vector<std::uint8_t> flags = active(g0);
  if (flags.size() != n.vertex_count()) {
    throw InvalidParameter("active predicate must return 2^n flags");
  }
  const DirectionMask full = n.full_mask();
  std::vector<DirectionMask> extra(n.vertex_count(), 0);
  // Each vertex's k-th draw comes from its own stream, so the phase in which
  // it is made cannot influence its value: G2 ~ Q^n(k) for any predicate.
  auto draw = [&](std::uint64_t v) {
    auto rng = make_stream(seed, StreamTag::staged_extra, v);
    extra[v] = random_member(rng, full & ~g0.choice(static_cast<VertexId>(v)));
  };
  for (std::uint64_t v = 0; v < extra.size(); ++v) {
    if (flags[v]) draw(v);
  }
  for (std::uint64_t v = 0; v < extra.size(); ++v) {
    if (!flags[v]) draw(v);
  }
  return StagedSample(std::move(g0), std::move(extra), std::move(flags));
}

void write_sample(std::ostream& out, const KOutSample& sample, std::uint64_t seed) {
  out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
  put_u32(out, static_cast<std::uint32_t>(sample.n().value()));
  put_u32(out, static_cast<std::uint32_t>(sample.k()));
  put_u64(out, seed);
  for (DirectionMask m : sample.choices().masks) put_u32(out, m);
  if (!out) throw FormatError("failed writing sample");
}

LoadedSample read_sample(std::istream& in) {
  std::array<char, kMagic.size()> magic{};
  if (!in.read(magic.data(), magic.size()) ||
      std::string_view(magic.data(), magic.size()) != kMagic) {
    throw FormatError("not a k-out cube sample (bad magic)");
  }
  const auto n = static_cast<int>(get_u32(in));
  const auto k = static_cast<int>(get_u32(in));
  const std::uint64_t seed = get_u64(in);
  if (n < 1 || n > kMaxDimension) throw FormatError("bad dimension in sample header");
  Dimension dim(n);
  std::vector<DirectionMask> masks(dim.vertex_count());
  for (auto& m : masks) m = get_u32(in);
  return LoadedSample{KOutSample(k, ChoiceMap(dim, std::move(masks))), seed};
}

}  // namespace koutcube
