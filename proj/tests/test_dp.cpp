#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "frozen_values.hpp"
#include "isoperim/dp.hpp"
#include "isoperim/int_set.hpp"
#include "isoperim/numeric.hpp"

using namespace isoperim;
using dp::HelperTables;
using dp::Layout;

namespace {

constexpr std::int64_t kInfValue = -1;

// Restricted minima over subsets of {0..k}, by enumerating subsets of
// {1..k}; returns -1 for "no set".
struct Brute {
  std::int64_t p = kInfValue, q = kInfValue, sigma = kInfValue;
};

// Entry n of the result holds the minima for volume n, 0 <= n <= max_n.
std::vector<Brute> brute_helpers(std::int64_t k, std::int64_t max_n) {
  std::vector<Brute> out(max_n + 1);
  auto upd = [](std::int64_t& slot, std::int64_t v) {
    if (slot < 0 || v < slot) slot = v;
  };
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::int64_t vol = 0;
    for (std::int64_t b = 0; b < k; ++b) vol += ((mask >> b) & 1) * (b + 1);
    if (vol > max_n) continue;
    for (int zero = 0; zero < 2; ++zero) {
      std::vector<std::uint64_t> el;
      if (zero) el.push_back(0);
      for (std::int64_t b = 0; b < k; ++b) {
        if ((mask >> b) & 1) el.push_back(b + 1);
      }
      const IntSet a(el);
      Brute& slot = out[vol];
      upd(slot.p, static_cast<std::int64_t>(perimeter(a)));
      upd(slot.q, static_cast<std::int64_t>(complement_perimeter(a)));
      if (a.contains(static_cast<std::uint64_t>(k))) {
        upd(slot.sigma, static_cast<std::int64_t>(complement_perimeter(a)));
      }
    }
  }
  return out;
}

std::int64_t as_int(ExtendedValue v) { return v.is_infinite() ? kInfValue : v.value(); }

const HelperTables& dense2000() {
  static const HelperTables t = HelperTables::build(2000, {Layout::dense, 1, std::uint64_t{4} << 30});
  return t;
}

const HelperTables& compact2000() {
  static const HelperTables t = HelperTables::build(2000, {Layout::compact, 1, std::uint64_t{4} << 30});
  return t;
}

}  // namespace

TEST(Dp, HelpersMatchSubsetSearch) {
  const auto& t = dense2000();
  const auto& c = compact2000();
  for (std::int64_t k = 0; k <= 18; ++k) {
    const auto row = brute_helpers(k, 40);
    for (std::int64_t n = 0; n <= 40; ++n) {
      const Brute& b = row[n];
      EXPECT_EQ(as_int(t.p(n, k)), b.p) << "p " << n << "," << k;
      EXPECT_EQ(as_int(t.q(n, k)), b.q) << "q " << n << "," << k;
      EXPECT_EQ(as_int(c.p(n, k)), b.p) << "p " << n << "," << k;
      EXPECT_EQ(as_int(c.q(n, k)), b.q) << "q " << n << "," << k;
      // sigma(0;0) is fixed at 0 by convention; the set {0} itself has per(A^c) = 1.
      if (n == 0 && k == 0) continue;
      EXPECT_EQ(as_int(t.sigma(n, k)), b.sigma) << "sigma " << n << "," << k;
      EXPECT_EQ(as_int(c.sigma(n, k)), b.sigma) << "sigma " << n << "," << k;
    }
  }
}

TEST(Dp, BoundaryConditions) {
  for (const HelperTables* t : {&dense2000(), &compact2000()}) {
    EXPECT_EQ(t->p(0, 0), ExtendedValue::finite(0));
    EXPECT_EQ(t->p(0, 50), ExtendedValue::finite(0));
    EXPECT_EQ(t->q(0, 7), ExtendedValue::finite(0));
    EXPECT_EQ(t->sigma(0, 0), ExtendedValue::finite(0));
    EXPECT_TRUE(t->p(-1, 5).is_infinite());
    EXPECT_TRUE(t->q(-3, 5).is_infinite());
    EXPECT_TRUE(t->sigma(-3, 5).is_infinite());
    EXPECT_TRUE(t->p(5, 0).is_infinite());
    EXPECT_TRUE(t->p(5, -2).is_infinite());
    EXPECT_TRUE(t->sigma(5, 1).is_infinite());
    EXPECT_TRUE(t->sigma(5, 6).is_infinite());
    EXPECT_TRUE(t->sigma(1, 0).is_infinite());
    EXPECT_EQ(t->sigma(1, 1), ExtendedValue::finite(2));
    EXPECT_THROW(t->p(2001, 3), TableCoverageError);
  }
}

TEST(Dp, DenseAndCompactAgreeEverywhere) {
  const auto& d = dense2000();
  const auto& c = compact2000();
  for (std::int64_t n = 0; n <= 2000; n += (n < 400 ? 1 : 37)) {
    for (std::int64_t k = -1; k <= n + 1; ++k) {
      ASSERT_EQ(d.p(n, k), c.p(n, k)) << n << "," << k;
      ASSERT_EQ(d.q(n, k), c.q(n, k)) << n << "," << k;
      ASSERT_EQ(d.sigma(n, k), c.sigma(n, k)) << n << "," << k;
    }
  }
  EXPECT_EQ(dp::compute_P_range(d), dp::compute_P_range(c));
  EXPECT_EQ(dp::compute_Q_range(d), dp::compute_Q_range(c));
  EXPECT_LT(c.footprint_bytes(), d.footprint_bytes());
  EXPECT_GE(c.step_width(), 1);
}

TEST(Dp, StructuralLaws) {
  const auto& t = compact2000();
  for (std::int64_t n = 1; n <= 2000; ++n) {
    const auto f = static_cast<std::int64_t>(f_of(static_cast<std::uint64_t>(n)));
    for (std::int64_t k = 1; k <= n; ++k) {
      ASSERT_LE(t.p(n, k), t.p(n, k - 1)) << n << "," << k;
      ASSERT_LE(t.q(n, k), t.q(n, k - 1)) << n << "," << k;
      if (k < f) {
        ASSERT_TRUE(t.p(n, k).is_infinite() && t.q(n, k).is_infinite() && t.sigma(n, k).is_infinite());
      } else {
        ASSERT_TRUE(t.p(n, k).is_finite()) << n << "," << k;
      }
    }
    ASSERT_EQ(t.sigma(n, n), ExtendedValue::finite(2 * n));
  }
}

TEST(Dp, MatchesFrozenSmallValues) {
  const auto P = dp::compute_P_range(compact2000());
  const auto Q = dp::compute_Q_range(compact2000());
  for (std::size_t n = 0; n < frozen::kSmallP.size(); ++n) {
    EXPECT_EQ(P[n], frozen::kSmallP[n]) << n;
    EXPECT_EQ(Q[n], frozen::kSmallQ[n]) << n;
  }
  EXPECT_EQ(P[154], 28u);
  EXPECT_EQ(Q[154], 28u);
  EXPECT_EQ(P[1771], 77u);
  EXPECT_EQ(Q[1771], 77u);
}

TEST(Dp, DirectRecurrencesAgree) {
  const auto& t = compact2000();
  const auto P = dp::compute_P_range(t);
  const auto Q = dp::compute_Q_range(t);
  for (std::uint64_t n = 2; n <= 2000; ++n) {
    ASSERT_EQ(dp::direct_P(t, n), P[n]) << n;
    ASSERT_EQ(dp::direct_Q(t, n), Q[n]) << n;
  }
  EXPECT_THROW(dp::direct_P(t, 1), std::invalid_argument);
  EXPECT_THROW(dp::direct_Q(t, 0), std::invalid_argument);
}

TEST(Dp, JobsDoNotChangeResults) {
  dp::BuildOptions one;
  dp::BuildOptions many;
  many.jobs = 3;
  const auto a = dp::compute_values(6000, one);
  const auto b = dp::compute_values(6000, many);
  EXPECT_EQ(a.P, b.P);
  EXPECT_EQ(a.Q, b.Q);
}

TEST(Dp, MemoryBudget) {
  dp::BuildOptions tight;
  tight.memory_budget = 1000;
  EXPECT_THROW(HelperTables::build(2000, tight), MemoryBudgetExceeded);
  try {
    HelperTables::build(2000, tight);
  } catch (const MemoryBudgetExceeded& e) {
    EXPECT_EQ(e.budget_bytes, 1000u);
    EXPECT_GT(e.attempted_bytes, 1000u);
  }
  EXPECT_GT(HelperTables::estimate_footprint(2000, Layout::dense),
            HelperTables::estimate_footprint(2000, Layout::compact));
}

TEST(Dp, CacheRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "isoperim_cache_test.bin";
  const auto v = dp::compute_values(500);
  dp::write_cache(path, v);
  const auto back = dp::read_cache(path);
  EXPECT_EQ(back.N, 500u);
  EXPECT_EQ(back.engine, Engine::dp);
  EXPECT_EQ(back.P, v.P);
  EXPECT_EQ(back.Q, v.Q);

  {
    std::ofstream bad(path, std::ios::binary);
    bad << "NOPE!\n";
  }
  EXPECT_THROW(dp::read_cache(path), std::runtime_error);
  {
    std::ofstream trunc(path, std::ios::binary);
    trunc << "ISOP1\n";
  }
  EXPECT_THROW(dp::read_cache(path), std::runtime_error);
  std::filesystem::remove(path);
}

TEST(Dp, EngineNames) {
  for (Engine e : {Engine::oracle, Engine::dp, Engine::fast, Engine::direct}) {
    EXPECT_EQ(engine_from_string(to_string(e)), e);
  }
  EXPECT_EQ(to_string(Engine::oracle), "brute");
  EXPECT_THROW(engine_from_string("quantum"), std::invalid_argument);
}
