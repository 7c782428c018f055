#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "isoperim/kernels.hpp"

using namespace isoperim::kernels;

namespace {

struct RowData {
  std::vector<std::int32_t> data;
  StepRows view;
};

// Random monotone step rows: ascending starts, nonincreasing values, some
// rows entirely infinite.
RowData random_rows(std::mt19937_64& rng, std::int32_t rows, std::int32_t width) {
  RowData r;
  r.data.assign(static_cast<std::size_t>(rows) * 2 * width, 0);
  for (std::int32_t m = 0; m < rows; ++m) {
    std::int32_t* row = r.data.data() + static_cast<std::size_t>(m) * 2 * width;
    const std::int32_t used = static_cast<std::int32_t>(rng() % (width + 1));
    std::int32_t start = static_cast<std::int32_t>(rng() % 50);
    std::int32_t value = 200 + static_cast<std::int32_t>(rng() % 500);
    for (std::int32_t s = 0; s < width; ++s) {
      if (s < used) {
        row[s] = start;
        row[width + s] = value;
        start += 1 + static_cast<std::int32_t>(rng() % 20);
        value -= static_cast<std::int32_t>(rng() % 30);
        if (value < 0) value = 0;
      } else {
        row[s] = INT32_MAX;
        row[width + s] = kInf;
      }
    }
  }
  r.view = StepRows{r.data.data(), width, rows};
  return r;
}

const KernelSet* simd() { return avx2_kernels(); }

}  // namespace

TEST(Kernels, ScalarIsAlwaysAvailable) {
  const std::string initial(active_kernels().name);
  EXPECT_EQ(scalar_kernels().name, "scalar");
  EXPECT_TRUE(select_kernels("scalar"));
  EXPECT_EQ(active_kernels().name, "scalar");
  EXPECT_FALSE(select_kernels("neon"));
  if (simd()) {
    EXPECT_TRUE(select_kernels("avx2"));
    EXPECT_EQ(active_kernels().name, "avx2");
  }
  EXPECT_TRUE(select_kernels(initial));
}

TEST(Kernels, EnvironmentOverride) {
  const char* env = std::getenv("ISOPERIM_SIMD");
  if (env && std::string(env) == "scalar") {
    EXPECT_EQ(active_kernels().name, "scalar");
  } else if (simd()) {
    EXPECT_EQ(active_kernels().name, "avx2");
  }
}

TEST(Kernels, StepLookup) {
  const std::int32_t data[] = {0, 3, INT32_MAX, 9, 4, kInf};
  const StepRows t{data, 3, 1};
  EXPECT_EQ(step_lookup(t, 0, -1), kInf);
  EXPECT_EQ(step_lookup(t, 0, 0), 9);
  EXPECT_EQ(step_lookup(t, 0, 2), 9);
  EXPECT_EQ(step_lookup(t, 0, 3), 4);
  EXPECT_EQ(step_lookup(t, 0, 1000), 4);
}

TEST(Kernels, InnerMinEquivalence) {
  if (!simd()) GTEST_SKIP() << "AVX2 kernels unavailable";
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 400; ++trial) {
    const std::int32_t width = 1 + static_cast<std::int32_t>(rng() % 4);
    const std::int32_t l_hi_max = 2 + static_cast<std::int32_t>(rng() % 60);
    const std::int64_t base = static_cast<std::int64_t>(rng() % 100);
    const std::int32_t rows = static_cast<std::int32_t>(base + std::int64_t{l_hi_max} * (l_hi_max + 1) / 2 + 1);
    const auto r = random_rows(rng, rows, width);
    for (std::int32_t l_lo = 1; l_lo <= l_hi_max; l_lo += 1 + static_cast<std::int32_t>(rng() % 5)) {
      for (std::int32_t l_hi = l_lo - 1; l_hi <= l_hi_max; l_hi += 1 + static_cast<std::int32_t>(rng() % 7)) {
        ASSERT_EQ(simd()->inner_min(r.view, base, l_lo, l_hi),
                  scalar_kernels().inner_min(r.view, base, l_lo, l_hi))
            << "base=" << base << " l=" << l_lo << ".." << l_hi << " width=" << width;
      }
    }
  }
}

TEST(Kernels, InnerMinEmptyRange) {
  std::mt19937_64 rng(1);
  const auto r = random_rows(rng, 10, 2);
  EXPECT_EQ(scalar_kernels().inner_min(r.view, 0, 3, 2), kInf);
  if (simd()) { EXPECT_EQ(simd()->inner_min(r.view, 0, 3, 2), kInf); }
}

TEST(Kernels, ReflectAddEquivalence) {
  std::mt19937_64 rng(8);
  for (std::size_t len = 0; len < 300; ++len) {
    std::vector<std::uint32_t> src(len);
    for (auto& x : src) x = static_cast<std::uint32_t>(rng() % 100000);
    std::vector<std::uint32_t> a(len, 7), b(len, 9);
    scalar_kernels().reflect_add(a.data(), src.data(), len, 17);
    for (std::size_t i = 0; i < len; ++i) ASSERT_EQ(a[i], 17 + src[len - 1 - i]);
    if (simd()) {
      simd()->reflect_add(b.data(), src.data(), len, 17);
      ASSERT_EQ(a, b) << len;
    }
  }
}

TEST(Kernels, LowerScanEquivalence) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t len = rng() % 200;
    const std::uint64_t n0 = 1 + rng() % 1000000;
    std::vector<std::uint32_t> P(len), Q(len);
    for (std::size_t i = 0; i < len; ++i) {
      // Mostly valid values near sqrt(2n), occasionally perturbed.
      const auto n = n0 + i;
      std::uint32_t p = 1;
      while (std::uint64_t{2 * p + 1} * (2 * p + 1) <= 8 * n) ++p;
      P[i] = p + static_cast<std::uint32_t>(rng() % 3);
      Q[i] = P[i] + static_cast<std::uint32_t>(rng() % 3);
      if (rng() % 500 == 0) P[i] = 0;
      if (rng() % 500 == 0) Q[i] = P[i] + 3;
      if (rng() % 500 == 0) Q[i] = 0;
    }
    const auto want = scalar_kernels().lower_scan(P.data(), Q.data(), len, n0);
    if (simd()) { ASSERT_EQ(simd()->lower_scan(P.data(), Q.data(), len, n0), want) << trial; }
  }
}

TEST(Kernels, LowerScanFindsEdgeCases) {
  // n = 2 and 3 are valid; at n = 4, P = 1 fails because 3^2 > 32 is false.
  const std::uint32_t P[] = {2, 2, 1};
  const std::uint32_t Q[] = {4, 3, 3};
  for (const KernelSet* k : {&scalar_kernels(), simd()}) {
    if (!k) continue;
    EXPECT_EQ(k->lower_scan(P, Q, 3, 2), 2u) << k->name;
    EXPECT_EQ(k->lower_scan(P, Q, 2, 2), 2u) << k->name;
  }
}
