// Compiled with -mavx2.  Nothing here may run unless dispatch confirmed
// CPU support.

#include "isoperim/kernels.hpp"

#include <immintrin.h>

#include <bit>

namespace isoperim::kernels::detail {

namespace {

std::int32_t hmin_epi32(__m256i v) {
  __m128i m = _mm_min_epi32(_mm256_castsi256_si128(v), _mm256_extracti128_si256(v, 1));
  m = _mm_min_epi32(m, _mm_shuffle_epi32(m, _MM_SHUFFLE(1, 0, 3, 2)));
  m = _mm_min_epi32(m, _mm_shuffle_epi32(m, _MM_SHUFFLE(2, 3, 0, 1)));
  return _mm_cvtsi128_si32(m);
}

std::int32_t inner_min_avx2(StepRows rows, std::int64_t base, std::int32_t l_lo,
                            std::int32_t l_hi) {
  if (l_lo > l_hi) return kInf;
  const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  const __m256i inf = _mm256_set1_epi32(kInf);
  const __m256i one = _mm256_set1_epi32(1);
  const __m256i two = _mm256_set1_epi32(2);
  const __m256i hi_plus = _mm256_set1_epi32(l_hi + 1);
  const __m256i vbase = _mm256_set1_epi32(static_cast<std::int32_t>(base));
  const __m256i stride = _mm256_set1_epi32(2 * rows.width);
  const int w = rows.width;

  __m256i acc = inf;
  for (std::int32_t l0 = l_lo; l0 <= l_hi; l0 += 8) {
    const __m256i l = _mm256_add_epi32(_mm256_set1_epi32(l0), lane);
    const __m256i valid = _mm256_cmpgt_epi32(hi_plus, l);
    const __m256i tri = _mm256_srli_epi32(_mm256_mullo_epi32(_mm256_sub_epi32(l, one), l), 1);
    // Lanes past l_hi read row 0, which always exists.
    const __m256i m = _mm256_and_si256(_mm256_add_epi32(vbase, tri), valid);
    const __m256i idx = _mm256_mullo_epi32(m, stride);
    const __m256i j = _mm256_sub_epi32(l, two);

    __m256i v = inf;
    for (int s = 0; s < w; ++s) {
      const __m256i st = _mm256_i32gather_epi32(rows.data + s, idx, 4);
      const __m256i val = _mm256_i32gather_epi32(rows.data + w + s, idx, 4);
      const __m256i inactive = _mm256_cmpgt_epi32(st, j);
      v = _mm256_min_epi32(v, _mm256_blendv_epi8(val, inf, inactive));
    }
    const __m256i term = _mm256_min_epi32(_mm256_add_epi32(l, v), inf);
    acc = _mm256_min_epi32(acc, _mm256_blendv_epi8(inf, term, valid));
  }
  return hmin_epi32(acc);
}

void reflect_add_avx2(std::uint32_t* dst, const std::uint32_t* src, std::size_t len,
                      std::uint32_t add) {
  const __m256i rev = _mm256_setr_epi32(7, 6, 5, 4, 3, 2, 1, 0);
  const __m256i vadd = _mm256_set1_epi32(static_cast<std::int32_t>(add));
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    const __m256i s =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + (len - i - 8)));
    const __m256i r = _mm256_add_epi32(_mm256_permutevar8x32_epi32(s, rev), vadd);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), r);
  }
  for (; i < len; ++i) dst[i] = add + src[len - 1 - i];
}

std::size_t lower_scan_avx2(const std::uint32_t* P, const std::uint32_t* Q, std::size_t len,
                            std::uint64_t n0) {
  const __m256i lane = _mm256_setr_epi64x(0, 1, 2, 3);
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i minus_two = _mm256_set1_epi64x(-2);
  const __m256i plus_two = _mm256_set1_epi64x(2);
  const __m256i zero = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256i p =
        _mm256_cvtepu32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(P + i)));
    const __m256i q =
        _mm256_cvtepu32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(Q + i)));
    const __m256i n8 = _mm256_slli_epi64(
        _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(n0 + i)), lane), 3);
    const __m256i diff = _mm256_sub_epi64(q, p);
    const __m256i p2 = _mm256_add_epi64(_mm256_add_epi64(p, p), one);
    const __m256i q2 = _mm256_sub_epi64(_mm256_add_epi64(q, q), one);

    __m256i ok = _mm256_cmpgt_epi64(diff, minus_two);
    ok = _mm256_andnot_si256(_mm256_cmpgt_epi64(diff, plus_two), ok);
    ok = _mm256_and_si256(ok, _mm256_cmpgt_epi64(_mm256_mul_epu32(p2, p2), n8));
    ok = _mm256_and_si256(ok, _mm256_cmpgt_epi64(q, zero));
    ok = _mm256_and_si256(ok, _mm256_cmpgt_epi64(_mm256_mul_epu32(q2, q2), n8));

    const unsigned mask = static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(ok)));
    if (mask != 0xF) return i + static_cast<std::size_t>(std::countr_one(mask));
  }
  for (; i < len; ++i) {
    const std::uint64_t n8 = 8 * (n0 + i);
    const std::int64_t diff = std::int64_t{Q[i]} - std::int64_t{P[i]};
    const std::uint64_t p2 = 2 * std::uint64_t{P[i]} + 1;
    const std::uint64_t q2 = 2 * std::uint64_t{Q[i]} - 1;
    if (!(diff >= -1 && diff <= 2 && p2 * p2 > n8 && Q[i] >= 1 && q2 * q2 > n8)) return i;
  }
  return len;
}

}  // namespace

const KernelSet& avx2_kernel_set() {
  static const KernelSet set{"avx2", &inner_min_avx2, &reflect_add_avx2, &lower_scan_avx2};
  return set;
}

}  // namespace isoperim::kernels::detail
