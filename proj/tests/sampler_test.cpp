#include "koutcube/sampler.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "koutcube/errors.hpp"
#include "koutcube/kernels.hpp"
#include "koutcube/stats.hpp"
#include "koutcube/structure.hpp"
#include "oracles.hpp"

using namespace koutcube;

namespace {

kernels::DegreeHistogram histogram_of(const ChoiceMap& choices) {
  kernels::DegreeHistogram hist{};
  const CubeGraph g = choices.undirected();
  for (VertexId v = 0; v < g.vertex_count(); ++v) ++hist[g.degree(v)];
  return hist;
}

}  // namespace

TEST(SampleKOut, ForcedCases) {
  const KOutSample one = sample_kout(Dimension(1), 1, Seed{9, 0});
  EXPECT_EQ(one.choice(0), 1U);
  EXPECT_EQ(one.choice(1), 1U);
  EXPECT_EQ(as_undirected(one).edge_count(), 1U);

  const KOutSample full = sample_kout(Dimension(5), 5, Seed{9, 3});
  const CubeGraph g = as_undirected(full);
  for (VertexId v = 0; v < 32; ++v) EXPECT_EQ(g.adjacency(v), 31U);
}

TEST(SampleKOut, RejectsBadK) {
  EXPECT_THROW(sample_kout(Dimension(4), 0, Seed{}), InvalidParameter);
  EXPECT_THROW(sample_kout(Dimension(4), 5, Seed{}), InvalidParameter);
}

TEST(SampleKOut, ReproducibleAndTrialSensitive) {
  const Dimension n(10);
  EXPECT_EQ(sample_kout(n, 3, Seed{42, 1}), sample_kout(n, 3, Seed{42, 1}));
  EXPECT_NE(sample_kout(n, 3, Seed{42, 1}), sample_kout(n, 3, Seed{42, 2}));
  EXPECT_NE(sample_kout(n, 3, Seed{42, 1}), sample_kout(n, 3, Seed{43, 1}));
}

TEST(SampleKOut, DegreeBounds) {
  for (int k = 1; k <= 6; ++k) {
    const KOutSample s = sample_kout(Dimension(6), k, Seed{5, static_cast<std::uint64_t>(k)});
    const CubeGraph g = as_undirected(s);
    for (VertexId v = 0; v < 64; ++v) {
      EXPECT_EQ(std::popcount(s.choice(v)), k);
      EXPECT_GE(g.degree(v), k);
      EXPECT_LE(g.degree(v), 6);
    }
  }
}

TEST(SampleKOut, FirstDirectionFairAtN2) {
  const std::uint64_t trials = 100000;
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    hits += sample_kout(Dimension(2), 1, Seed{77, t}).choice(0) == 1U ? 1 : 0;
  }
  const double rate = static_cast<double>(hits) / trials;
  EXPECT_NEAR(rate, 0.5, 3 * stats::binomial_sigma(0.5, trials));
}

TEST(SampleKOut, SubsetsUniformForFixedVertex) {
  // n = 4, k = 2: six subsets; chi-square against the uniform law.
  const std::uint64_t trials = 30000;
  std::map<DirectionMask, std::uint64_t> counts;
  for (std::uint64_t t = 0; t < trials; ++t) ++counts[sample_kout(Dimension(4), 2, Seed{8, t}).choice(5)];
  ASSERT_EQ(counts.size(), 6U);
  double chi2 = 0.0;
  const double expect = trials / 6.0;
  for (const auto& [mask, c] : counts) chi2 += (c - expect) * (c - expect) / expect;
  // 99.9% quantile of chi-square with 5 degrees of freedom.
  EXPECT_LT(chi2, 20.515);
}

TEST(AsUndirected, MutualChoiceIsOneEdge) {
  // n = 1: both endpoints choose the same edge.
  EXPECT_EQ(as_undirected(sample_kout(Dimension(1), 1, Seed{})).edge_count(), 1U);
  ChoiceMap m(Dimension(2), {0b01, 0b01, 0b10, 0b01});
  const KOutSample s(1, m);
  // 0-1 mutual, 2-0 and 3-2: three edges.
  EXPECT_EQ(as_undirected(s).edge_count(), 3U);
}

TEST(AsUndirected, EdgeCountMeanAtK1) {
  const int n = 12;
  const double expect = std::ldexp(1.0, n) - std::ldexp(1.0, n - 1) / n;
  stats::RunningStats edges;
  for (std::uint64_t t = 0; t < 400; ++t) {
    edges.add(static_cast<double>(as_undirected(sample_kout(Dimension(n), 1, Seed{3, t})).edge_count()));
  }
  EXPECT_NEAR(edges.mean(), expect, 3 * edges.stddev() / std::sqrt(400.0));
}

TEST(SampleOneOut, ForcedAndReproducible) {
  const FunctionalMap f = sample_one_out(Dimension(1), Seed{1, 1});
  EXPECT_EQ(f.target(0), 1U);
  EXPECT_EQ(f.target(1), 0U);
  const FunctionalMap a = sample_one_out(Dimension(2), Seed{4, 0});
  const FunctionalMap b = sample_one_out(Dimension(2), Seed{4, 0});
  EXPECT_TRUE(std::equal(a.directions().begin(), a.directions().end(), b.directions().begin()));
  EXPECT_EQ(a.as_sample().k(), 1);
}

TEST(SampleOneOut, ConnectivityMatchesExhaustiveLawAtN2) {
  // Each of the 2^4 direction vectors is equally likely.
  int connected = 0;
  for (int code = 0; code < 16; ++code) {
    std::vector<std::uint32_t> choices(4);
    for (int v = 0; v < 4; ++v) choices[v] = 1U << ((code >> v) & 1);
    connected += oracle::component_sizes(oracle::cube_adjacency(2, choices)).size() == 1 ? 1 : 0;
  }
  const double exact = connected / 16.0;
  // Disconnected only when the four choices pair up into one of the two
  // perfect matchings of the 4-cycle.
  EXPECT_DOUBLE_EQ(exact, 14.0 / 16.0);

  const std::uint64_t trials = 100000;
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    hits += components(as_undirected(sample_one_out(Dimension(2), Seed{12, t}).as_sample())).count == 1;
  }
  EXPECT_NEAR(static_cast<double>(hits) / trials, exact, 3 * stats::binomial_sigma(exact, trials));
}

TEST(ExtendHalf, ForcedAtN2) {
  const KOutSample base = sample_kout(Dimension(2), 1, Seed{2, 0});
  const ChoiceMap ext = extend_half(base.choices(), 0, Seed{2, 1});
  for (VertexId v = 0; v < 4; ++v) {
    if (parity_class(v) == 0) EXPECT_EQ(ext.masks[v], 3U);
    else EXPECT_EQ(ext.masks[v], base.choice(v));
  }
}

TEST(ExtendHalf, TouchesOnlyOneClassAndAddsFreshDirection) {
  const KOutSample base = sample_kout(Dimension(9), 3, Seed{6, 0});
  for (int parity : {0, 1}) {
    const ChoiceMap ext = extend_half(base.choices(), parity, Seed{6, 1});
    for (VertexId v = 0; v < 512; ++v) {
      if (parity_class(v) != parity) {
        EXPECT_EQ(ext.masks[v], base.choice(v));
      } else {
        EXPECT_EQ(ext.masks[v] & base.choice(v), base.choice(v));
        EXPECT_EQ(std::popcount(ext.masks[v] ^ base.choice(v)), 1);
      }
    }
  }
}

TEST(ExtendHalf, RefusesFullVertices) {
  const KOutSample full = sample_kout(Dimension(3), 3, Seed{});
  EXPECT_THROW(extend_half(full.choices(), 0, Seed{}), NoRoom);
}

TEST(ExtendHalf, ChainedExtensionMatchesTwoOutDegreeLaw) {
  const Dimension n(8);
  std::vector<std::uint64_t> chained(9, 0);
  std::vector<std::uint64_t> direct(9, 0);
  for (std::uint64_t t = 0; t < 2000; ++t) {
    const ChoiceMap one = sample_kout(n, 1, Seed{21, t}).choices();
    const ChoiceMap half = extend_half(one, 0, Seed{22, t});
    const ChoiceMap two = extend_half(half, 1, Seed{23, t});
    for (VertexId v = 0; v < 256; ++v) ASSERT_EQ(std::popcount(two.masks[v]), 2);
    const auto a = histogram_of(two);
    const auto b = histogram_of(sample_kout(n, 2, Seed{24, t}).choices());
    for (int d = 0; d <= 8; ++d) {
      chained[d] += a[d];
      direct[d] += b[d];
    }
  }
  EXPECT_GT(stats::chi_square_homogeneity(chained, direct).p_value, 0.01);
}

TEST(StagedSample, PredicateExtremes) {
  const Dimension n(7);
  const StagedSample all = staged_sample(n, 3, all_active(), Seed{5, 0});
  EXPECT_EQ(all.g1(), all.g2().choices());
  EXPECT_EQ(all.active_count(), 128U);
  const StagedSample none = staged_sample(n, 3, none_active(), Seed{5, 0});
  EXPECT_EQ(none.g1(), none.g0().choices());
  EXPECT_EQ(none.active_count(), 0U);
  // The final sample does not depend on the predicate.
  EXPECT_EQ(all.g2(), none.g2());
}

TEST(StagedSample, NestedEdgeSets) {
  const Dimension n(8);
  auto odd = [](const KOutSample& g0) {
    std::vector<std::uint8_t> flags(g0.n().vertex_count());
    for (VertexId v = 0; v < flags.size(); ++v) flags[v] = std::popcount(g0.choice(v) ^ v) & 1;
    return flags;
  };
  for (std::uint64_t t = 0; t < 20; ++t) {
    const StagedSample s = staged_sample(n, 3, odd, Seed{8, t});
    const CubeGraph g0 = as_undirected(s.g0());
    const CubeGraph g1 = s.g1().undirected();
    const CubeGraph g2 = as_undirected(s.g2());
    for (VertexId v = 0; v < 256; ++v) {
      EXPECT_EQ(g0.adjacency(v) & ~g1.adjacency(v), 0U);
      EXPECT_EQ(g1.adjacency(v) & ~g2.adjacency(v), 0U);
      EXPECT_EQ(s.extra(v) & s.g0().choice(v), 0U);
      EXPECT_EQ(std::popcount(s.extra(v)), 1);
    }
  }
}

TEST(StagedSample, RejectsSmallK) {
  EXPECT_THROW(staged_sample(Dimension(4), 1, all_active(), Seed{}), InvalidParameter);
}

TEST(BinaryFormat, RoundTrip) {
  const KOutSample s = sample_kout(Dimension(6), 2, Seed{99, 0});
  std::stringstream buf;
  write_sample(buf, s, 99);
  const std::string bytes = buf.str();
  ASSERT_EQ(bytes.size(), 8 + 4 + 4 + 8 + 64 * 4U);
  EXPECT_EQ(bytes.substr(0, 8), "KOUTCUBE");
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 6);  // little-endian n
  const LoadedSample back = read_sample(buf);
  EXPECT_EQ(back.sample, s);
  EXPECT_EQ(back.seed, 99U);
}

TEST(BinaryFormat, RejectsCorruptInput) {
  std::stringstream bad_magic("NOTACUBE........................");
  EXPECT_THROW(read_sample(bad_magic), FormatError);

  const KOutSample s = sample_kout(Dimension(3), 1, Seed{});
  std::stringstream buf;
  write_sample(buf, s, 0);
  std::string truncated = buf.str();
  truncated.resize(truncated.size() - 3);
  std::stringstream cut(truncated);
  EXPECT_THROW(read_sample(cut), FormatError);
}
