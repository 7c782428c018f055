#include <gtest/gtest.h>

#include <set>

#include "frozen_values.hpp"
#include "isoperim/oracle.hpp"

using namespace isoperim;

namespace {

// Partitions of n into distinct parts, by the textbook 0/1 knapsack count.
std::vector<std::uint64_t> distinct_partition_counts(std::uint64_t N) {
  std::vector<std::uint64_t> c(N + 1, 0);
  c[0] = 1;
  for (std::uint64_t part = 1; part <= N; ++part) {
    for (std::uint64_t v = N; v >= part; --v) c[v] += c[v - part];
  }
  return c;
}

}  // namespace

TEST(Oracle, EnumerationCountsMatchDistinctPartitions) {
  const auto counts = distinct_partition_counts(40);
  for (std::uint64_t n = 0; n <= 40; ++n) {
    std::uint64_t seen = 0;
    std::set<std::vector<std::uint64_t>> distinct;
    oracle::enumerate_volume_sets(n, [&](const IntSet& a) {
      ++seen;
      ASSERT_EQ(volume(a), n);
      distinct.emplace(a.elements().begin(), a.elements().end());
    });
    // Each partition appears with and without the element 0.
    EXPECT_EQ(seen, 2 * counts[n]) << n;
    EXPECT_EQ(distinct.size(), seen) << n;
  }
}

TEST(Oracle, VolumeZero) {
  const auto sets = oracle::volume_sets(0);
  ASSERT_EQ(sets.size(), 2u);
  EXPECT_TRUE(std::find(sets.begin(), sets.end(), IntSet()) != sets.end());
  EXPECT_TRUE(std::find(sets.begin(), sets.end(), IntSet({0})) != sets.end());
  EXPECT_EQ(oracle::brute_P(0), 0u);
  EXPECT_EQ(oracle::brute_Q(0), 0u);
}

TEST(Oracle, CeilingEnforced) {
  EXPECT_THROW(oracle::brute_P(71), std::out_of_range);
  EXPECT_THROW(oracle::volume_sets(30, 20), std::out_of_range);
  EXPECT_NO_THROW(oracle::brute_P(20, 20));
}

TEST(Oracle, MatchesFrozenValues) {
  for (std::uint64_t n = 0; n < frozen::kSmallP.size(); ++n) {
    EXPECT_EQ(oracle::brute_P(n), frozen::kSmallP[n]) << n;
    EXPECT_EQ(oracle::brute_Q(n), frozen::kSmallQ[n]) << n;
  }
}

TEST(Oracle, IndependentSubsetSearchAgrees) {
  // Bitmask search over subsets of {1..n}; adding 0 never changes the volume.
  for (std::uint64_t n = 0; n <= 22; ++n) {
    std::uint64_t best_p = UINT64_MAX;
    std::uint64_t best_q = UINT64_MAX;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      std::uint64_t vol = 0;
      for (std::uint64_t b = 0; b < n; ++b) vol += ((mask >> b) & 1) * (b + 1);
      if (vol != n) continue;
      for (int zero = 0; zero < 2; ++zero) {
        const std::uint64_t m = (mask << 1) | zero;  // bit z <=> z in A
        auto in = [&](std::int64_t z) { return z >= 0 && z < 64 && ((m >> z) & 1); };
        std::uint64_t per = 0;
        std::uint64_t cper = 0;
        for (std::int64_t z = 0; z <= static_cast<std::int64_t>(n) + 1; ++z) {
          if (in(z) && !(in(z - 1) && in(z + 1))) per += z;
          const bool cz = !in(z);
          const bool cl = z > 0 && !in(z - 1);
          const bool cr = !in(z + 1);
          if (cz && !(cl && cr)) cper += z;
        }
        best_p = std::min(best_p, per);
        best_q = std::min(best_q, cper);
      }
    }
    EXPECT_EQ(best_p, frozen::kSmallP[n]) << n;
    EXPECT_EQ(best_q, frozen::kSmallQ[n]) << n;
  }
}

TEST(Oracle, WitnessesAttainTheMinimum) {
  for (std::uint64_t n : {0u, 1u, 2u, 10u, 29u, 40u}) {
    const auto mp = oracle::minimize_perimeter(n);
    ASSERT_FALSE(mp.witnesses.empty());
    for (const auto& w : mp.witnesses) {
      EXPECT_EQ(volume(w), n);
      EXPECT_EQ(perimeter(w), mp.value);
    }
    const auto mq = oracle::minimize_complement_perimeter(n);
    ASSERT_FALSE(mq.witnesses.empty());
    for (const auto& w : mq.witnesses) {
      EXPECT_EQ(volume(w), n);
      EXPECT_EQ(complement_perimeter(w), mq.value);
    }
  }
  // {0,1,2} attains P(3) = 2; {1,2} and {0,3} only reach 3.
  const auto m3 = oracle::minimize_perimeter(3);
  EXPECT_EQ(m3.value, 2u);
  EXPECT_TRUE(std::find(m3.witnesses.begin(), m3.witnesses.end(), IntSet({0, 1, 2})) !=
              m3.witnesses.end());
}
