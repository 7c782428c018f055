#include "isoperim/fast.hpp"

#include <stdexcept>

#include "isoperim/kernels.hpp"
#include "isoperim/numeric.hpp"

namespace isoperim {

FastEngine::FastEngine(ExceptionTable table) : table_(std::move(table)) {}

bool FastEngine::p_identity_fails(std::uint64_t n) const {
  const auto* r = table_.find(n);
  return r && r->p_identity_fails;
}

bool FastEngine::q_identity_fails(std::uint64_t n) const {
  const auto* r = table_.find(n);
  return r && r->q_identity_fails;
}

std::uint64_t FastEngine::eval(bool want_p, std::uint64_t n) const {
  check_supported(n);
  // Walk the full orbit down to 0; each step swaps P and Q.
  const GOrbit orbit = g_orbit(n, 0);
  std::uint64_t acc = 0;
  for (const std::uint64_t m : orbit.iterates) {
    if (m == 0) return acc;  // P(0) = Q(0) = 0
    if (const auto* r = table_.find(m)) {
      if (want_p && r->p_identity_fails) return acc + r->P;
      if (!want_p && r->q_identity_fails) return acc + r->Q;
    }
    acc += f_of(m) + (want_p ? 0 : 1);
    want_p = !want_p;
  }
  return acc;
}

std::uint64_t FastEngine::P(std::uint64_t n) const { return eval(true, n); }
std::uint64_t FastEngine::Q(std::uint64_t n) const { return eval(false, n); }

std::uint64_t FastEngine::quasi_explicit(bool want_p, std::uint64_t n) const {
  const GOrbit orbit = g_orbit(n, table_.max_n());
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < orbit.phi; ++i) sum += f_of(orbit.iterates[i]);
  const std::uint64_t base = orbit.last();
  const std::uint64_t phi = orbit.phi;
  if (phi % 2 == 0) return (want_p ? P(base) : Q(base)) + sum + phi / 2;
  return want_p ? Q(base) + sum + (phi - 1) / 2 : P(base) + sum + (phi + 1) / 2;
}

std::uint64_t FastEngine::quasi_explicit_P(std::uint64_t n) const {
  return quasi_explicit(true, n);
}
std::uint64_t FastEngine::quasi_explicit_Q(std::uint64_t n) const {
  return quasi_explicit(false, n);
}

std::optional<std::uint64_t> FastEngine::shift_P(std::uint64_t n) const {
  if (n < 2) throw std::invalid_argument("shift_P needs n >= 2");
  const auto d = decompose(n);
  if (d.g + 1 >= d.f) return std::nullopt;
  if (p_identity_fails(n) || p_identity_fails(n - d.f)) return std::nullopt;
  return 1 + P(n - d.f);
}

std::optional<std::uint64_t> FastEngine::shift_Q(std::uint64_t n) const {
  if (n < 2) throw std::invalid_argument("shift_Q needs n >= 2");
  const auto d = decompose(n);
  if (d.g + 1 >= d.f) return std::nullopt;
  if (q_identity_fails(n) || q_identity_fails(n - d.f)) return std::nullopt;
  return 1 + Q(n - d.f);
}

std::optional<std::uint64_t> FastEngine::double_step_P(std::uint64_t n) const {
  const auto d = decompose(n);
  if (p_identity_fails(n) || q_identity_fails(d.g)) return std::nullopt;
  const auto e = decompose(d.g);
  return 1 + d.f + e.f + P(e.g);
}

std::optional<std::uint64_t> FastEngine::double_step_Q(std::uint64_t n) const {
  const auto d = decompose(n);
  if (q_identity_fails(n) || p_identity_fails(d.g)) return std::nullopt;
  const auto e = decompose(d.g);
  return 1 + d.f + e.f + Q(e.g);
}

ValueTable FastEngine::table(std::uint64_t N) const {
  if (N >= (std::uint64_t{1} << 36)) throw std::out_of_range("fast table: N too large");
  ValueTable t;
  t.N = N;
  t.engine = Engine::fast;
  t.P.assign(N + 1, 0);
  t.Q.assign(N + 1, 0);
  const auto& kern = kernels::active_kernels();
  const auto records = table_.records();
  std::size_t next = 0;
  while (next < records.size() && records[next].n == 0) ++next;

  for (std::uint64_t r = 1; triangular(r - 1) + 1 <= N; ++r) {
    const std::uint64_t start = triangular(r - 1) + 1;
    const std::uint64_t len = std::min(r, N - start + 1);
    // Entry i of the row has g = r - 1 - i; a truncated row starts at g = r-1.
    const std::uint64_t skip = r - len;
    kern.reflect_add(t.P.data() + start, t.Q.data() + skip, len, static_cast<std::uint32_t>(r));
    kern.reflect_add(t.Q.data() + start, t.P.data() + skip, len,
                     static_cast<std::uint32_t>(r + 1));
    for (; next < records.size() && records[next].n < start + len; ++next) {
      const auto& rec = records[next];
      if (rec.p_identity_fails) t.P[rec.n] = rec.P;
      if (rec.q_identity_fails) t.Q[rec.n] = rec.Q;
    }
  }
  return t;
}

}  // namespace isoperim
