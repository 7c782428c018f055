#pragma once

// Exact integer arithmetic for triangular numbers and the (f, g) row/offset
// decomposition n = T_f - g.  Nothing in here touches floating point.

#include <cstdint>
#include <vector>

namespace isoperim {

using u64 = std::uint64_t;

/// Largest n accepted by the public API.  Above this 8n+1 and T_f start to
/// crowd the 64-bit range.
inline constexpr u64 kMaxSupportedN = 400'000'000'000'000'000ULL;

/// Threshold beyond which the identities P = f + Q(g), Q = 1 + f + P(g)
/// hold without exception.
inline constexpr u64 kLargestException = 149'894;

/// Throws std::out_of_range if n > kMaxSupportedN.
void check_supported(u64 n);

/// floor(sqrt(m)) for any 64-bit m.
u64 isqrt(u64 m);

/// T_k = k(k+1)/2.  Caller guarantees no overflow (k < 2^32).
constexpr u64 triangular(u64 k) noexcept { return k * (k + 1) / 2; }

/// Row index: the unique f with T_{f-1} < n <= T_f for n >= 1, f(0) = 0.
u64 f_of(u64 n);

/// Offset within the row: g(n) = T_{f(n)} - n.
u64 g_of(u64 n);

struct FGDecomposition {
  u64 n = 0;
  u64 f = 0;
  u64 g = 0;

  friend bool operator==(const FGDecomposition&, const FGDecomposition&) = default;
};

/// Validated (f, g) pair for n.  The invariants n = T_f - g and 0 <= g < f
/// (or f = g = 0 at n = 0) are checked before returning.
FGDecomposition decompose(u64 n);

/// The g-iterates n, g(n), g(g(n)), ... truncated at the first value that is
/// at most `threshold`.  phi is the index of that value.  g fixes 0, and
/// g(k) < k for every k >= 1, so the orbit always terminates.
struct GOrbit {
  u64 start = 0;
  u64 threshold = 0;
  std::vector<u64> iterates;
  std::size_t phi = 0;

  u64 last() const { return iterates.back(); }
};

GOrbit g_orbit(u64 n, u64 threshold = kLargestException);

/// Exact test of g^L(n) <= 2 (n/2)^(1/2^L), i.e. x^(2^L) <= n 2^(2^L - 1)
/// with x = g^L(n).  Used for the doubly logarithmic decay of orbits.
bool orbit_decay_bound_holds(u64 n, u64 x, unsigned L);

}  // namespace isoperim
