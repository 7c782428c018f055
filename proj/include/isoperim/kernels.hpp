#pragma once

// Data-parallel inner loops.  Each kernel has a scalar reference and, on
// x86-64, an AVX2 variant.  The variant is chosen once at runtime from CPU
// support; setting ISOPERIM_SIMD=scalar forces the reference path.  All
// variants must produce bit-identical results.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace isoperim::kernels {

/// Sentinel for "no set exists".  Small enough that adding any index to it
/// cannot overflow an int32.
inline constexpr std::int32_t kInf = 0x3fffffff;

/// Monotone step rows.  Row m occupies 2*width consecutive slots: `width`
/// step starts (ascending, padded with INT32_MAX) followed by `width`
/// values (nonincreasing, padded with kInf).  lookup(m, j) is the value of
/// the last step whose start is <= j, or kInf if there is none.
struct StepRows {
  const std::int32_t* data = nullptr;
  std::int32_t width = 0;
  std::int32_t rows = 0;
};

inline std::int32_t step_lookup(StepRows t, std::int64_t m, std::int32_t j) {
  const std::int32_t* row = t.data + m * 2 * t.width;
  std::int32_t v = kInf;
  for (std::int32_t s = 0; s < t.width; ++s) {
    if (j >= row[s]) v = row[t.width + s] < v ? row[t.width + s] : v;
  }
  return v;
}

/// min over l in [l_lo, l_hi] of  l + lookup(base + T_{l-1}, l - 2),  with
/// T_{l-1} = (l-1)l/2.  Caller guarantees base + T_{l_lo-1} >= 0 and
/// l_hi < 46000.  Returns kInf for an empty range or when every term is
/// infinite.
using InnerMinFn = std::int32_t (*)(StepRows rows, std::int64_t base, std::int32_t l_lo,
                                    std::int32_t l_hi);

/// dst[i] = add + src[len-1-i].
using ReflectAddFn = void (*)(std::uint32_t* dst, const std::uint32_t* src, std::size_t len,
                              std::uint32_t add);

/// Scans n = n0 + i for i in [0, len), n0 >= 1, and returns the first i where
///   -1 <= Q - P <= 2,  (2P+1)^2 > 8n,  (2Q-1)^2 > 8n with Q >= 1
/// does not hold, or len if all hold.  Values must stay below 2^30.
using LowerScanFn = std::size_t (*)(const std::uint32_t* P, const std::uint32_t* Q,
                                    std::size_t len, std::uint64_t n0);

struct KernelSet {
  std::string_view name;
  InnerMinFn inner_min;
  ReflectAddFn reflect_add;
  LowerScanFn lower_scan;
};

const KernelSet& scalar_kernels();

/// nullptr when the AVX2 variants were not compiled in or the CPU lacks AVX2.
const KernelSet* avx2_kernels();

/// The variant used by the engines.
const KernelSet& active_kernels();

/// Overrides the runtime choice ("scalar" or "avx2").  Returns false if the
/// requested set is unavailable.
bool select_kernels(std::string_view name);

}  // namespace isoperim::kernels
