#include <gtest/gtest.h>

#include <random>

#include "frozen_values.hpp"
#include "isoperim/dp.hpp"
#include "isoperim/fast.hpp"
#include "isoperim/kernels.hpp"
#include "isoperim/numeric.hpp"

using namespace isoperim;

namespace {

const FastEngine& engine() {
  static const FastEngine e;
  return e;
}

const ValueTable& dp2000() {
  static const ValueTable t = dp::compute_values(2000);
  return t;
}

}  // namespace

TEST(Fast, KnownValues) {
  const auto& e = engine();
  EXPECT_EQ(e.P(0), 0u);
  EXPECT_EQ(e.Q(0), 0u);
  EXPECT_EQ(e.P(8), 7u);
  EXPECT_EQ(e.Q(92), 23u);
  EXPECT_EQ(e.P(29), 14u);
  EXPECT_EQ(e.P(154), 28u);
  EXPECT_EQ(e.Q(154), 28u);
  EXPECT_EQ(e.P(149894), 596u);
  for (std::uint64_t n = 0; n < frozen::kSmallP.size(); ++n) {
    EXPECT_EQ(e.P(n), frozen::kSmallP[n]) << n;
    EXPECT_EQ(e.Q(n), frozen::kSmallQ[n]) << n;
  }
}

TEST(Fast, AgreesWithDp) {
  const auto& t = dp2000();
  for (std::uint64_t n = 0; n <= 2000; ++n) {
    ASSERT_EQ(engine().P(n), t.P[n]) << n;
    ASSERT_EQ(engine().Q(n), t.Q[n]) << n;
  }
}

TEST(Fast, IdentityAboveTheTable) {
  const auto& e = engine();
  const auto d = decompose(150000);
  EXPECT_EQ(e.P(150000), d.f + e.Q(d.g));
  EXPECT_EQ(e.Q(150000), 1 + d.f + e.P(d.g));
  EXPECT_EQ(e.P(150000), e.quasi_explicit_P(150000));
}

TEST(Fast, QuasiExplicitAgreesOnRandomSample) {
  const auto& e = engine();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::uint64_t> dist(0, 1'000'000'000'000ULL);
  for (int i = 0; i < 20000; ++i) {
    const auto n = dist(rng);
    ASSERT_EQ(e.quasi_explicit_P(n), e.P(n)) << n;
    ASSERT_EQ(e.quasi_explicit_Q(n), e.Q(n)) << n;
    const auto diff = static_cast<std::int64_t>(e.Q(n)) - static_cast<std::int64_t>(e.P(n));
    ASSERT_GE(diff, -1);
    ASSERT_LE(diff, 2);
  }
  // Below the threshold phi = 0 and the formula is the engine itself.
  for (std::uint64_t n = 0; n <= 3000; ++n) ASSERT_EQ(e.quasi_explicit_P(n), e.P(n));
  EXPECT_NO_THROW(e.P(kMaxSupportedN));
  EXPECT_THROW(e.P(kMaxSupportedN + 1), std::out_of_range);
}

TEST(Fast, ShiftCorollary) {
  const auto& e = engine();
  std::size_t applied_p = 0;
  std::size_t applied_q = 0;
  for (std::uint64_t n = 2; n <= 100000; ++n) {
    const auto d = decompose(n);
    const auto sp = e.shift_P(n);
    const auto sq = e.shift_Q(n);
    if (d.g + 1 >= d.f) {
      ASSERT_FALSE(sp.has_value()) << n;
      ASSERT_FALSE(sq.has_value()) << n;
    }
    if (sp) {
      ASSERT_EQ(*sp, e.P(n)) << n;
      ++applied_p;
    }
    if (sq) {
      ASSERT_EQ(*sq, e.Q(n)) << n;
      ++applied_q;
    }
  }
  EXPECT_GT(applied_p, 90000u);
  EXPECT_GT(applied_q, 90000u);
  EXPECT_THROW(e.shift_P(1), std::invalid_argument);
  // g(n) = f(n) - 1: first entry of a row.
  EXPECT_FALSE(e.shift_P(triangular(100) + 1).has_value());
}

TEST(Fast, DoubleStepCorollary) {
  const auto& e = engine();
  for (std::uint64_t n = 0; n <= 100000; ++n) {
    if (const auto v = e.double_step_P(n)) { ASSERT_EQ(*v, e.P(n)) << n; }
    if (const auto v = e.double_step_Q(n)) { ASSERT_EQ(*v, e.Q(n)) << n; }
  }
  // Guard: n = 154 fails both identities.
  EXPECT_FALSE(e.double_step_P(154).has_value());
  EXPECT_FALSE(e.double_step_Q(154).has_value());
  // n = 150000: applicable iff g(n) is not flagged for the other identity.
  const auto g = g_of(150000);
  EXPECT_EQ(e.double_step_P(150000).has_value(), !e.q_identity_fails(g));
  EXPECT_EQ(e.double_step_Q(150000).has_value(), !e.p_identity_fails(g));
}

TEST(Fast, TableMatchesPointwise) {
  const auto& e = engine();
  const auto t = e.table(200000);
  ASSERT_EQ(t.P.size(), 200001u);
  for (std::uint64_t n = 0; n <= 200000; n += (n < 5000 ? 1 : 13)) {
    ASSERT_EQ(t.P[n], e.P(n)) << n;
    ASSERT_EQ(t.Q[n], e.Q(n)) << n;
  }
  // Truncated last rows and tiny tables.
  for (std::uint64_t N : {0u, 1u, 2u, 5u, 6u, 7u, 100u}) {
    const auto s = e.table(N);
    for (std::uint64_t n = 0; n <= N; ++n) {
      ASSERT_EQ(s.P[n], e.P(n)) << N << " " << n;
      ASSERT_EQ(s.Q[n], e.Q(n)) << N << " " << n;
    }
  }
}

TEST(Fast, TableIndependentOfKernel) {
  const std::string initial(kernels::active_kernels().name);
  ASSERT_TRUE(kernels::select_kernels("scalar"));
  const auto a = engine().table(50000);
  if (kernels::select_kernels("avx2")) {
    const auto b = engine().table(50000);
    EXPECT_EQ(a.P, b.P);
    EXPECT_EQ(a.Q, b.Q);
  }
  kernels::select_kernels(initial);
}

TEST(Fast, CustomTableChangesResults) {
  // Without the n = 2 row, P(2) falls back to f(2) + Q(1) = 4.
  const auto t = ExceptionTable::parse("n,P,Q,p_exc,q_exc\n0,0,0,0,1\n");
  const FastEngine e(t);
  EXPECT_EQ(e.P(2), 4u);
  EXPECT_EQ(e.Q(1), 2u);
}
