#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "isoperim/numeric.hpp"

using namespace isoperim;
using boost::multiprecision::cpp_int;

namespace {

// f(n) by linear search over triangular numbers, for small n.
u64 f_by_search(u64 n) {
  u64 f = 0;
  while (triangular(f) < n) ++f;
  return f;
}

}  // namespace

TEST(Isqrt, EdgeValues) {
  EXPECT_EQ(isqrt(0), 0u);
  EXPECT_EQ(isqrt(1), 1u);
  EXPECT_EQ(isqrt(3), 1u);
  EXPECT_EQ(isqrt(4), 2u);
  EXPECT_EQ(isqrt(UINT64_MAX), 4294967295u);
  EXPECT_EQ(isqrt(4294967296ULL * 4294967296ULL - 1), 4294967295u);
  for (u64 r : {1ULL, 2ULL, 1000ULL, 3037000499ULL, 4294967295ULL}) {
    EXPECT_EQ(isqrt(r * r), r);
    EXPECT_EQ(isqrt(r * r - 1), r - 1);
    if (r < 4294967295ULL) { EXPECT_EQ(isqrt(r * r + 2 * r), r); }
  }
}

TEST(Isqrt, RandomAgreesWithDefinition) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200000; ++i) {
    const u64 m = rng() >> (rng() % 64);
    const u64 r = isqrt(m);
    ASSERT_LE(cpp_int(r) * r, m);
    ASSERT_GT((cpp_int(r) + 1) * (r + 1), m);
  }
}

TEST(FG, SmallValues) {
  const u64 f[] = {0, 1, 2, 2, 3, 3, 3, 4, 4, 4, 4, 5};
  const u64 g[] = {0, 0, 1, 0, 2, 1, 0, 3, 2, 1, 0, 4};
  for (u64 n = 0; n < 12; ++n) {
    EXPECT_EQ(f_of(n), f[n]) << n;
    EXPECT_EQ(g_of(n), g[n]) << n;
  }
}

TEST(FG, MatchesSearchAndInvariants) {
  for (u64 n = 0; n <= 200000; ++n) {
    const auto d = decompose(n);
    ASSERT_EQ(d.f, f_by_search(n));
    ASSERT_EQ(triangular(d.f) - d.g, n);
    if (n > 0) { ASSERT_LT(d.g, d.f); }
  }
}

// The three representations of f: ceil((sqrt(8n+1) - 1)/2), ceil(sqrt(2n) - 1/2)
// and the nearest integer to sqrt(2n), each turned into an integer predicate.
TEST(FG, ThreeRepresentationsAgree) {
  std::mt19937_64 rng(11);
  auto check = [](u64 n) {
    const cpp_int f = f_of(n);
    const cpp_int N = n;
    // f = ceil((sqrt(8n+1)-1)/2)  <=>  (2f-1)^2 < 8n+1 <= (2f+1)^2
    const bool first = n == 0 ? f == 0 : (2 * f - 1) * (2 * f - 1) < 8 * N + 1 &&
                                              8 * N + 1 <= (2 * f + 1) * (2 * f + 1);
    // f = ceil(sqrt(2n) - 1/2)  <=>  f - 1 < sqrt(2n) - 1/2 <= f
    //   <=>  (2f-1)^2 < 8n <= (2f+1)^2
    const bool second = n == 0 ? f == 0 : (2 * f - 1) * (2 * f - 1) < 8 * N &&
                                               8 * N <= (2 * f + 1) * (2 * f + 1);
    // f = [sqrt(2n)]  <=>  |sqrt(2n) - f| < 1/2  <=>  (2f-1)^2 < 8n < (2f+1)^2
    const bool third = n == 0 ? f == 0 : (2 * f - 1) * (2 * f - 1) < 8 * N &&
                                              8 * N < (2 * f + 1) * (2 * f + 1);
    return first && second && third;
  };
  for (u64 n = 0; n <= 100000; ++n) ASSERT_TRUE(check(n)) << n;
  for (int i = 0; i < 100000; ++i) {
    const u64 n = rng() % (kMaxSupportedN + 1);
    ASSERT_TRUE(check(n)) << n;
  }
  for (u64 k : {1000000ULL, 894427000ULL, 894427001ULL}) {
    for (u64 n : {triangular(k) - 1, triangular(k), triangular(k) + 1}) ASSERT_TRUE(check(n)) << n;
  }
}

TEST(FG, NearTriangularNumbersAtScale) {
  // Near 10^12 and the ceiling, where a floating square root would misround.
  for (u64 k : {1414213ULL, 1414214ULL, 894427000ULL}) {
    const u64 t = triangular(k);
    EXPECT_EQ(f_of(t), k);
    EXPECT_EQ(g_of(t), 0u);
    EXPECT_EQ(f_of(t + 1), k + 1);
    EXPECT_EQ(g_of(t + 1), k);
    EXPECT_EQ(f_of(t - 1), k);
    EXPECT_EQ(g_of(t - 1), 1u);
  }
  EXPECT_NO_THROW(decompose(kMaxSupportedN));
}

TEST(FG, CeilingEnforced) {
  EXPECT_NO_THROW(check_supported(kMaxSupportedN));
  EXPECT_THROW(check_supported(kMaxSupportedN + 1), std::out_of_range);
  EXPECT_THROW(decompose(kMaxSupportedN + 1), std::out_of_range);
}

TEST(Orbit, Examples) {
  const auto o = g_orbit(1'000'000'000'000ULL);
  EXPECT_EQ(o.iterates.front(), 1'000'000'000'000ULL);
  EXPECT_EQ(o.iterates[1], g_of(1'000'000'000'000ULL));
  EXPECT_EQ(o.phi, o.iterates.size() - 1);
  EXPECT_LE(o.last(), kLargestException);
  EXPECT_GT(o.iterates[o.phi - 1], kLargestException);

  const auto small = g_orbit(149894);
  EXPECT_EQ(small.phi, 0u);
  EXPECT_EQ(small.last(), 149894u);

  const auto to_zero = g_orbit(1000, 0);
  EXPECT_EQ(to_zero.last(), 0u);
  for (std::size_t i = 1; i < to_zero.iterates.size(); ++i) {
    EXPECT_LT(to_zero.iterates[i], to_zero.iterates[i - 1]);
  }
}

TEST(Orbit, DecayBoundExact) {
  // g^L(n) <= 2 (n/2)^(1/2^L) for every n and L.
  for (u64 n = 0; n <= 100000; ++n) {
    u64 x = n;
    for (unsigned L = 0; L <= 6; ++L) {
      ASSERT_TRUE(orbit_decay_bound_holds(n, x, L)) << n << " " << L;
      x = g_of(x);
    }
  }
  // A value just above the bound is rejected: L = 1, n = 8: 2 * sqrt(4) = 4.
  EXPECT_TRUE(orbit_decay_bound_holds(8, 4, 1));
  EXPECT_FALSE(orbit_decay_bound_holds(8, 5, 1));
}

TEST(Orbit, DepthIsTiny) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const u64 n = rng() % (kMaxSupportedN + 1);
    EXPECT_LE(g_orbit(n).phi, 3u) << n;
  }
}
