#include "verify.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

#include "isoperim/analysis.hpp"
#include "isoperim/numeric.hpp"
#include "isoperim/oracle.hpp"

namespace isoperim::cli {

namespace {

std::string first_violation(const analysis::BoundReport& r) {
  if (r.pass()) return "";
  const auto& v = r.violations.front();
  std::ostringstream os;
  os << r.violations.size() << " violation(s); first n=" << v.n << " " << v.bound << " lhs=" << v.lhs
     << " rhs=" << v.rhs;
  return os.str();
}

SuiteResult ok(const std::string& name, const std::string& detail) { return {name, true, detail}; }
SuiteResult bad(const std::string& name, const std::string& detail) { return {name, false, detail}; }

dp::BuildOptions build_options(const VerifyOptions& o) {
  dp::BuildOptions b;
  b.jobs = o.jobs;
  b.memory_budget = o.memory_budget;
  return b;
}

std::string mismatch(const char* what, std::uint64_t n, std::uint64_t got, std::uint64_t want) {
  std::ostringstream os;
  os << what << " differs at n=" << n << ": " << got << " vs " << want;
  return os.str();
}

SuiteResult suite_oracle_dp(const VerifyOptions& o, const FastEngine& fast) {
  VerifyOptions small = o;
  small.max = std::min<std::uint64_t>(o.max, 60);
  return run_cross({Engine::oracle, Engine::dp}, small, fast);
}

SuiteResult suite_table_rows(const VerifyOptions& o, const FastEngine& fast) {
  const auto dpv = dp::compute_values(o.max, build_options(o));
  std::size_t checked = 0;
  for (const auto& r : fast.exceptions().records()) {
    if (r.n > o.max) break;
    if (dpv.P[r.n] != r.P) return bad("table_rows", mismatch("P", r.n, dpv.P[r.n], r.P));
    if (dpv.Q[r.n] != r.Q) return bad("table_rows", mismatch("Q", r.n, dpv.Q[r.n], r.Q));
    ++checked;
  }
  return ok("table_rows", std::to_string(checked) + " rows with n <= " + std::to_string(o.max));
}

SuiteResult suite_exceptions(const VerifyOptions& o, const FastEngine& fast) {
  const auto regen = analysis::regenerate_exceptions(o.max, build_options(o));
  const auto diff = analysis::diff_exceptions(regen, fast.exceptions(), o.max);
  std::ostringstream os;
  os << regen.size() << " flagged n <= " << o.max << "; missing " << diff.missing.size() << ", extra "
     << diff.extra.size() << ", flag mismatches " << diff.flag_mismatch.size() << ", value mismatches "
     << diff.value_mismatch.size();
  return {"exceptions", diff.empty(), os.str()};
}

SuiteResult suite_engines(const VerifyOptions& o, const FastEngine& fast) {
  auto cross = run_cross({Engine::dp, Engine::fast, Engine::direct}, o, fast);
  if (!cross.pass) return {"engines", false, cross.detail};
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<std::uint64_t> dist(0, 1'000'000'000'000ULL);
  for (std::uint64_t i = 0; i < o.samples; ++i) {
    const std::uint64_t n = dist(rng);
    const auto P = fast.P(n);
    const auto Q = fast.Q(n);
    if (fast.quasi_explicit_P(n) != P) return bad("engines", mismatch("quasi_explicit_P", n, fast.quasi_explicit_P(n), P));
    if (fast.quasi_explicit_Q(n) != Q) return bad("engines", mismatch("quasi_explicit_Q", n, fast.quasi_explicit_Q(n), Q));
    const auto diff = static_cast<std::int64_t>(Q) - static_cast<std::int64_t>(P);
    if (diff < -1 || diff > 2) return bad("engines", "Q - P outside [-1, 2] at n=" + std::to_string(n));
  }
  return ok("engines", cross.detail + "; quasi_explicit = fast on " + std::to_string(o.samples) +
                           " random n <= 10^12");
}

SuiteResult suite_bounds(const VerifyOptions& o, const FastEngine& fast) {
  const auto r = analysis::check_bounds(o.bounds_max, Engine::fast, fast, o.jobs);
  return {"bounds", r.pass(), r.pass() ? "1 <= n <= " + std::to_string(o.bounds_max) : first_violation(r)};
}

SuiteResult suite_window(const VerifyOptions& o, const FastEngine& fast) {
  const auto r = analysis::check_window(fast.table(o.bounds_max));
  return {"window", r.pass(), r.pass() ? "0 <= n <= " + std::to_string(o.bounds_max) : first_violation(r)};
}

SuiteResult suite_structure(const VerifyOptions& o, const FastEngine&) {
  const auto tables = dp::HelperTables::build(o.max, build_options(o));
  const auto N = static_cast<std::int64_t>(o.max);
  for (std::int64_t n = 1; n <= N; ++n) {
    const auto f = static_cast<std::int64_t>(f_of(static_cast<std::uint64_t>(n)));
    for (std::int64_t k = 1; k <= n; ++k) {
      if (tables.p(n, k) > tables.p(n, k - 1)) return bad("structure", "p not monotone at n=" + std::to_string(n));
      if (k < f && (tables.p(n, k).is_finite() || tables.q(n, k).is_finite() ||
                    tables.sigma(n, k).is_finite())) {
        return bad("structure", "finite helper value below f(n) at n=" + std::to_string(n));
      }
    }
    if (tables.sigma(n, n) != ExtendedValue::finite(2 * n)) {
      return bad("structure", "sigma(n;n) != 2n at n=" + std::to_string(n));
    }
  }
  for (std::uint64_t n = 0; n <= o.bounds_max; ++n) {
    const auto d = decompose(n);  // validates its own invariants
    if (n > 0 && !(triangular(d.f - 1) < n && n <= triangular(d.f))) {
      return bad("structure", "row decomposition broken at n=" + std::to_string(n));
    }
    std::uint64_t x = n;
    for (unsigned L = 0; L <= 6; ++L) {
      if (!orbit_decay_bound_holds(n, x, L)) {
        return bad("structure", "orbit bound fails at n=" + std::to_string(n) + ", L=" + std::to_string(L));
      }
      x = g_of(x);
    }
  }
  return ok("structure", "helper tables n <= " + std::to_string(o.max) + "; decomposition and orbit n <= " +
                             std::to_string(o.bounds_max));
}

SuiteResult suite_reflection(const VerifyOptions& o, const FastEngine& fast) {
  std::uint64_t rows = 1;
  while (analysis::triangle_extent(rows + 1) <= o.max) ++rows;
  const auto values = dp::compute_values(o.max, build_options(o));
  const auto r = analysis::check_row_reflection(values, fast.exceptions(), rows);
  return {"reflection", r.pass(), r.pass() ? std::to_string(rows) + " rows" : first_violation(r)};
}

SuiteResult suite_asymptotic(const VerifyOptions&, const FastEngine& fast) {
  std::ostringstream os;
  bool pass = true;
  for (std::uint64_t n : {10'000ULL, 1'000'000ULL, 100'000'000ULL, 10'000'000'000ULL,
                          1'000'000'000'000ULL}) {
    const auto s = analysis::check_asymptotic(n, fast.P(n));
    pass = pass && s.lower_ok && s.upper_ok;
    os << "n=" << n << " ratio=" << s.ratio << (s.lower_ok && s.upper_ok ? " ok; " : " FAIL; ");
  }
  return {"asymptotic", pass, os.str()};
}

}  // namespace

ValueTable values_for(Engine engine, std::uint64_t N, const FastEngine& fast,
                      const dp::BuildOptions& options) {
  switch (engine) {
    case Engine::oracle: {
      ValueTable t;
      t.N = N;
      t.engine = Engine::oracle;
      for (std::uint64_t n = 0; n <= N; ++n) {
        t.P.push_back(static_cast<std::uint32_t>(oracle::brute_P(n)));
        t.Q.push_back(static_cast<std::uint32_t>(oracle::brute_Q(n)));
      }
      return t;
    }
    case Engine::dp:
      return dp::compute_values(N, options);
    case Engine::fast:
      return fast.table(N);
    case Engine::direct: {
      const auto tables = dp::HelperTables::build(N, options);
      ValueTable t;
      t.N = N;
      t.engine = Engine::direct;
      t.P = dp::compute_P_range(tables);
      t.Q = dp::compute_Q_range(tables);
      for (std::uint64_t n = 2; n <= N; ++n) {
        t.P[n] = static_cast<std::uint32_t>(dp::direct_P(tables, n));
        t.Q[n] = static_cast<std::uint32_t>(dp::direct_Q(tables, n));
      }
      return t;
    }
  }
  throw std::invalid_argument("unknown engine");
}

SuiteResult run_cross(const std::vector<Engine>& engines, const VerifyOptions& o,
                      const FastEngine& fast) {
  if (engines.size() < 2) throw std::invalid_argument("--cross needs at least two engines");
  std::vector<ValueTable> tables;
  for (Engine e : engines) tables.push_back(values_for(e, o.max, fast, build_options(o)));
  std::string names;
  for (std::size_t i = 0; i < engines.size(); ++i) names += (i ? "," : "") + to_string(engines[i]);
  for (std::size_t i = 1; i < tables.size(); ++i) {
    for (std::uint64_t n = 0; n <= o.max; ++n) {
      if (tables[i].P[n] != tables[0].P[n]) {
        return bad("cross", mismatch(("P " + to_string(engines[i]) + " vs " + to_string(engines[0])).c_str(), n,
                                     tables[i].P[n], tables[0].P[n]));
      }
      if (tables[i].Q[n] != tables[0].Q[n]) {
        return bad("cross", mismatch(("Q " + to_string(engines[i]) + " vs " + to_string(engines[0])).c_str(), n,
                                     tables[i].Q[n], tables[0].Q[n]));
      }
    }
  }
  return ok("cross", names + " agree on 0 <= n <= " + std::to_string(o.max));
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& o, const FastEngine& fast) {
  SuiteResult r;
  if (name == "oracle_dp") r = suite_oracle_dp(o, fast);
  else if (name == "table_rows") r = suite_table_rows(o, fast);
  else if (name == "exceptions") r = suite_exceptions(o, fast);
  else if (name == "engines") r = suite_engines(o, fast);
  else if (name == "bounds") r = suite_bounds(o, fast);
  else if (name == "window") r = suite_window(o, fast);
  else if (name == "structure") r = suite_structure(o, fast);
  else if (name == "reflection") r = suite_reflection(o, fast);
  else if (name == "asymptotic") r = suite_asymptotic(o, fast);
  else throw std::invalid_argument("unknown suite '" + name + "'");
  r.name = name;
  return r;
}

}  // namespace isoperim::cli
