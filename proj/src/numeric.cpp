#include "isoperim/numeric.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace isoperim {

void check_supported(u64 n) {
  if (n > kMaxSupportedN) {
    throw std::out_of_range("n = " + std::to_string(n) +
                            " exceeds the supported ceiling " +
                            std::to_string(kMaxSupportedN));
  }
}

u64 isqrt(u64 m) {
  if (m < 2) return m;
  // Start above the root: 2^ceil(bits/2) > sqrt(m).
  const int bits = 64 - std::countl_zero(m);
  u64 x = u64{1} << ((bits + 1) / 2);
  while (true) {
    const u64 y = (x + m / x) / 2;
    if (y >= x) break;
    x = y;
  }
  return x;
}

u64 f_of(u64 n) {
  check_supported(n);
  if (n == 0) return 0;
  // r = largest integer with T_r <= n.
  const u64 r = (isqrt(8 * n + 1) - 1) / 2;
  return triangular(r) == n ? r : r + 1;
}

u64 g_of(u64 n) { return triangular(f_of(n)) - n; }

FGDecomposition decompose(u64 n) {
  const u64 f = f_of(n);
  const FGDecomposition d{n, f, triangular(f) - n};
  const bool ok = n == 0 ? (d.f == 0 && d.g == 0)
                         : (triangular(d.f) - d.g == n && d.g < d.f);
  if (!ok) {
    throw std::logic_error("decomposition invariant broken at n = " +
                           std::to_string(n));
  }
  return d;
}

GOrbit g_orbit(u64 n, u64 threshold) {
  check_supported(n);
  GOrbit orbit;
  orbit.start = n;
  orbit.threshold = threshold;
  orbit.iterates.push_back(n);
  while (orbit.iterates.back() > threshold) {
    orbit.iterates.push_back(g_of(orbit.iterates.back()));
  }
  orbit.phi = orbit.iterates.size() - 1;
  return orbit;
}

bool orbit_decay_bound_holds(u64 n, u64 x, unsigned L) {
  using boost::multiprecision::cpp_int;
  if (x <= 1) {
    // x^(2^L) is x itself; the right side is at least n/2 * 2 = n for L = 0
    // and at least n otherwise.
    return x <= n;
  }
  const unsigned e = 1u << L;
  const cpp_int lhs = boost::multiprecision::pow(cpp_int(x), e);
  const cpp_int rhs = cpp_int(n) << (e - 1);
  return lhs <= rhs;
}

}  // namespace isoperim
