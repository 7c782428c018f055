#include "isoperim/kernels.hpp"

namespace isoperim::kernels {

namespace {

std::int32_t inner_min_scalar(StepRows rows, std::int64_t base, std::int32_t l_lo,
                              std::int32_t l_hi) {
  std::int32_t best = kInf;
  for (std::int32_t l = l_lo; l <= l_hi; ++l) {
    const std::int64_t m = base + std::int64_t{l - 1} * l / 2;
    const std::int32_t v = step_lookup(rows, m, l - 2);
    const std::int32_t term = v >= kInf ? kInf : l + v;
    if (term < best) best = term;
  }
  return best;
}

void reflect_add_scalar(std::uint32_t* dst, const std::uint32_t* src, std::size_t len,
                        std::uint32_t add) {
  for (std::size_t i = 0; i < len; ++i) dst[i] = add + src[len - 1 - i];
}

std::size_t lower_scan_scalar(const std::uint32_t* P, const std::uint32_t* Q, std::size_t len,
                              std::uint64_t n0) {
  for (std::size_t i = 0; i < len; ++i) {
    const std::uint64_t n8 = 8 * (n0 + i);
    const std::int64_t diff = std::int64_t{Q[i]} - std::int64_t{P[i]};
    const std::uint64_t p2 = 2 * std::uint64_t{P[i]} + 1;
    const std::uint64_t q2 = 2 * std::uint64_t{Q[i]} - 1;
    const bool ok = diff >= -1 && diff <= 2 && p2 * p2 > n8 && Q[i] >= 1 && q2 * q2 > n8;
    if (!ok) return i;
  }
  return len;
}

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet set{"scalar", &inner_min_scalar, &reflect_add_scalar,
                             &lower_scan_scalar};
  return set;
}

}  // namespace isoperim::kernels
