#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "quartersim/rng.hpp"

using namespace quartersim;

TEST(Rng, DerivedStreamsAreReproducibleAndIndependent) {
  auto a = RngStream::derive(42, "assign/pv");
  auto b = RngStream::derive(42, "assign/pv");
  auto c = RngStream::derive(42, "assign/bes");
  int same = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    same += x == c.next_u64();
  }
  EXPECT_EQ(same, 0);
}

TEST(Rng, UniformStaysInRange) {
  RngStream r(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, IndexCoversEveryValue) {
  RngStream r(2);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) ++hits[r.index(7)];
  for (int h : hits) EXPECT_GT(h, 850);
}

TEST(Rng, SampleWithoutReplacementIsExactAndSorted) {
  RngStream r(3);
  for (std::size_t k = 0; k <= 20; ++k) {
    const auto s = sample_without_replacement(r, 20, k);
    ASSERT_EQ(s.size(), k);
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
    EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), k);
    for (auto v : s) EXPECT_LT(v, 20u);
  }
}

TEST(Rng, PermutationIsABijection) {
  RngStream r(4);
  auto p = permutation(r, 50);
  std::sort(p.begin(), p.end());
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], i);
}

// Sequences are pinned so that a standard-library change cannot silently alter scenarios.
TEST(Rng, FirstDrawsArePinned) {
  auto r = RngStream::derive(20200420, "assign/pv");
  const auto first = r.next_u64();
  auto again = RngStream::derive(20200420, "assign/pv");
  EXPECT_EQ(first, again.next_u64());
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafull);
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
}
