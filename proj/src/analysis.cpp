#include "isoperim/analysis.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "isoperim/kernels.hpp"
#include "isoperim/numeric.hpp"

namespace isoperim::analysis {

namespace {

using i64 = std::int64_t;
using u128 = unsigned __int128;

void require_both(const ValueTable& values, const char* who) {
  if (!values.has_P() || !values.has_Q()) {
    throw std::invalid_argument(std::string(who) + ": table must hold both P and Q");
  }
}

// ---- growth bound -----------------------------------------------------------

double growth_rhs_double(std::uint64_t n) {
  const double x = static_cast<double>(n);
  return std::sqrt(2 * x) + (std::pow(8 * x, 0.25) + 1) * (std::log2(std::log2(x / 2)) - 1) + 7;
}

class Mp {
 public:
  Mp() { mpfr_init2(v, 160); }
  ~Mp() { mpfr_clear(v); }
  Mp(const Mp&) = delete;
  Mp& operator=(const Mp&) = delete;
  mpfr_t v;
};

// Outward-rounded enclosure [lo, hi] of the growth bound's right-hand side.
void growth_rhs_interval(std::uint64_t n, double& lo_out, double& hi_out) {
  Mp lo, hi, a_lo, a_hi, b_lo, b_hi, t;
  // sqrt(2n)
  mpfr_set_uj(t.v, n, MPFR_RNDN);  // exact at 160 bits
  mpfr_mul_2ui(t.v, t.v, 1, MPFR_RNDN);
  mpfr_sqrt(lo.v, t.v, MPFR_RNDD);
  mpfr_sqrt(hi.v, t.v, MPFR_RNDU);
  // 2^(3/4) n^(1/4) + 1 = (8n)^(1/4) + 1
  mpfr_mul_2ui(t.v, t.v, 2, MPFR_RNDN);
  mpfr_sqrt(a_lo.v, t.v, MPFR_RNDD);
  mpfr_sqrt(a_lo.v, a_lo.v, MPFR_RNDD);
  mpfr_add_ui(a_lo.v, a_lo.v, 1, MPFR_RNDD);
  mpfr_sqrt(a_hi.v, t.v, MPFR_RNDU);
  mpfr_sqrt(a_hi.v, a_hi.v, MPFR_RNDU);
  mpfr_add_ui(a_hi.v, a_hi.v, 1, MPFR_RNDU);
  // log2(log2(n/2)) - 1
  mpfr_set_uj(t.v, n, MPFR_RNDN);
  mpfr_div_2ui(t.v, t.v, 1, MPFR_RNDN);
  mpfr_log2(b_lo.v, t.v, MPFR_RNDD);
  mpfr_log2(b_lo.v, b_lo.v, MPFR_RNDD);
  mpfr_sub_ui(b_lo.v, b_lo.v, 1, MPFR_RNDD);
  mpfr_log2(b_hi.v, t.v, MPFR_RNDU);
  mpfr_log2(b_hi.v, b_hi.v, MPFR_RNDU);
  mpfr_sub_ui(b_hi.v, b_hi.v, 1, MPFR_RNDU);
  // a * b with a > 0 and b of either sign.
  Mp p_lo, p_hi;
  if (mpfr_sgn(b_lo.v) >= 0) {
    mpfr_mul(p_lo.v, a_lo.v, b_lo.v, MPFR_RNDD);
  } else {
    mpfr_mul(p_lo.v, a_hi.v, b_lo.v, MPFR_RNDD);
  }
  if (mpfr_sgn(b_hi.v) >= 0) {
    mpfr_mul(p_hi.v, a_hi.v, b_hi.v, MPFR_RNDU);
  } else {
    mpfr_mul(p_hi.v, a_lo.v, b_hi.v, MPFR_RNDU);
  }
  mpfr_add(lo.v, lo.v, p_lo.v, MPFR_RNDD);
  mpfr_add_ui(lo.v, lo.v, 7, MPFR_RNDD);
  mpfr_add(hi.v, hi.v, p_hi.v, MPFR_RNDU);
  mpfr_add_ui(hi.v, hi.v, 7, MPFR_RNDU);
  lo_out = mpfr_get_d(lo.v, MPFR_RNDD);
  hi_out = mpfr_get_d(hi.v, MPFR_RNDU);
}

// ---- per-n predicates -------------------------------------------------------

bool p_sqrt_lower(std::uint64_t n, std::uint64_t P) {
  const u128 l = 2 * u128{P} + 1;
  return l * l > u128{8} * n;
}

bool q_sqrt_lower(std::uint64_t n, std::uint64_t Q) {
  if (Q == 0) return false;
  const u128 l = 2 * u128{Q} - 1;
  return l * l > u128{8} * n;
}

// X >= min{A, sqrt(2(g+f+1)) + c/2, B}: true if X reaches any one term.
bool orbit_lower(i64 X, i64 A, std::optional<i64> B, i64 c, std::uint64_t g, std::uint64_t f) {
  if (X >= A) return true;
  if (B && X >= *B) return true;
  const i64 d = 2 * X - c;
  return d >= 0 && u128(d) * u128(d) >= u128{8} * (g + f + 1);
}

double sqrt2n(std::uint64_t n) { return std::sqrt(2.0 * static_cast<double>(n)); }

void check_one(const ValueTable& v, std::uint64_t n, bool scanned_ok, std::vector<Violation>& out) {
  const std::uint64_t P = v.P[n];
  const std::uint64_t Q = v.Q[n];
  const auto d = decompose(n);
  const i64 f = static_cast<i64>(d.f);
  const double s = sqrt2n(n);
  auto add = [&](const char* name, i64 lhs, double rhs) { out.push_back({n, name, lhs, rhs}); };

  if (!scanned_ok) {
    if (!p_sqrt_lower(n, P)) add("P_sqrt_lower", static_cast<i64>(P), s - 0.5);
    if (!q_sqrt_lower(n, Q)) add("Q_sqrt_lower", static_cast<i64>(Q), s + 0.5);
    const i64 diff = static_cast<i64>(Q) - static_cast<i64>(P);
    if (diff < -1 || diff > 2) add("QP_window", diff, diff < -1 ? -1 : 2);
  }
  if (static_cast<i64>(P) < f) add("P_row_lower", static_cast<i64>(P), static_cast<double>(f));
  if (static_cast<i64>(Q) < f + 1) add("Q_row_lower", static_cast<i64>(Q), static_cast<double>(f + 1));

  const i64 Qg = v.Q[d.g];
  const i64 Pg = v.P[d.g];
  if (static_cast<i64>(P) > f + Qg) add("P_identity_upper", static_cast<i64>(P), static_cast<double>(f + Qg));
  if (static_cast<i64>(Q) > 1 + f + Pg) add("Q_identity_upper", static_cast<i64>(Q), static_cast<double>(1 + f + Pg));

  if (n > 2) {
    if (growth_upper_holds(n, P) != Decision::holds) add("P_growth_upper", static_cast<i64>(P), growth_upper_value(n));
    if (growth_upper_holds(n, Q) != Decision::holds) add("Q_growth_upper", static_cast<i64>(Q), growth_upper_value(n));
  }
  if (n >= 2) {
    const i64 X = static_cast<i64>(P) - f;
    const i64 Y = static_cast<i64>(Q) - 1 - f;
    const double root = std::sqrt(2.0 * static_cast<double>(d.g + d.f + 1));
    if (!orbit_lower(X, Qg, f - 2, 3, d.g, d.f)) {
      add("P_orbit_lower", static_cast<i64>(P), static_cast<double>(f) + std::min({double(Qg), root + 1.5, double(f - 2)}));
    }
    if (!orbit_lower(Y, Pg, std::nullopt, 1, d.g, d.f)) {
      add("Q_orbit_lower", static_cast<i64>(Q), static_cast<double>(1 + f) + std::min(double(Pg), root + 0.5));
    }
  }
}

std::vector<Violation> check_span(const ValueTable& v, std::uint64_t lo, std::uint64_t hi) {
  std::vector<Violation> out;
  const auto& kern = kernels::active_kernels();
  const bool small = std::all_of(v.P.begin() + lo, v.P.begin() + hi + 1, [](auto x) { return x < (1u << 30); }) &&
                     std::all_of(v.Q.begin() + lo, v.Q.begin() + hi + 1, [](auto x) { return x < (1u << 30); });
  std::uint64_t n = lo;
  while (n <= hi) {
    std::uint64_t stop = hi + 1;
    if (small) {
      stop = n + kern.lower_scan(v.P.data() + n, v.Q.data() + n, hi + 1 - n, n);
    }
    for (; n < stop; ++n) check_one(v, n, small, out);
    if (n <= hi) {
      check_one(v, n, false, out);
      ++n;
    }
  }
  return out;
}

}  // namespace

// ---- exceptions --------------------------------------------------------------

std::vector<ExceptionRecord> flag_exceptions(const ValueTable& values) {
  require_both(values, "flag_exceptions");
  std::vector<ExceptionRecord> out;
  for (std::uint64_t n = 0; n <= values.N; ++n) {
    const auto d = decompose(n);
    ExceptionRecord r{n, values.P[n], values.Q[n], false, false};
    r.p_identity_fails = r.P != d.f + values.Q[d.g];
    r.q_identity_fails = r.Q != 1 + d.f + values.P[d.g];
    if (r.p_identity_fails || r.q_identity_fails) out.push_back(r);
  }
  return out;
}

std::vector<ExceptionRecord> regenerate_exceptions(std::uint64_t N, const dp::BuildOptions& options) {
  return flag_exceptions(dp::compute_values(N, options));
}

ExceptionDiff diff_exceptions(const std::vector<ExceptionRecord>& regenerated,
                              const ExceptionTable& table, std::uint64_t N) {
  ExceptionDiff diff;
  diff.N = N;
  std::map<std::uint64_t, const ExceptionRecord*> mine;
  for (const auto& r : regenerated) {
    if (r.n <= N) mine.emplace(r.n, &r);
  }
  for (const auto& t : table.records()) {
    if (t.n > N) break;
    const auto it = mine.find(t.n);
    if (it == mine.end()) {
      if (t.p_identity_fails || t.q_identity_fails) diff.missing.push_back(t.n);
      continue;
    }
    const ExceptionRecord& r = *it->second;
    if (r.p_identity_fails != t.p_identity_fails || r.q_identity_fails != t.q_identity_fails) {
      diff.flag_mismatch.push_back(t.n);
    }
    if (r.P != t.P || r.Q != t.Q) diff.value_mismatch.push_back(t.n);
    mine.erase(it);
  }
  for (const auto& [n, r] : mine) diff.extra.push_back(n);
  return diff;
}

// ---- bounds --------------------------------------------------------------------

double growth_upper_value(std::uint64_t n) { return growth_rhs_double(n); }

double growth_slack(std::uint64_t n) {
  const double s = sqrt2n(n);
  return (growth_rhs_double(n) - s) / s;
}

Decision growth_upper_holds(std::uint64_t n, std::uint64_t lhs, bool strict) {
  if (n <= 2) throw std::invalid_argument("growth bound needs n > 2");
  const double x = static_cast<double>(lhs);
  const double rhs = growth_rhs_double(n);
  const double margin = 1e-9 * (std::abs(rhs) + 1);
  if (x < rhs - margin) return Decision::holds;
  if (x > rhs + margin) return Decision::fails;
  double lo = 0;
  double hi = 0;
  growth_rhs_interval(n, lo, hi);
  if (strict ? x < lo : x <= lo) return Decision::holds;
  if (strict ? x >= hi : x > hi) return Decision::fails;
  return Decision::undecided;
}

BoundReport check_bounds(const ValueTable& values, unsigned jobs) {
  require_both(values, "check_bounds");
  BoundReport report;
  report.n_max = values.N;
  if (values.N == 0) return report;
  const std::uint64_t total = values.N;
  const unsigned shards = static_cast<unsigned>(
      std::clamp<std::uint64_t>(jobs, 1, std::max<std::uint64_t>(1, total / 65536)));
  std::vector<std::vector<Violation>> parts(shards);
  {
    std::vector<std::jthread> workers;
    for (unsigned s = 0; s < shards; ++s) {
      const std::uint64_t lo = 1 + total * s / shards;
      const std::uint64_t hi = total * (s + 1) / shards;
      workers.emplace_back([&, s, lo, hi] { parts[s] = check_span(values, lo, hi); });
    }
  }
  for (auto& p : parts) {
    report.violations.insert(report.violations.end(), p.begin(), p.end());
  }
  return report;
}

BoundReport check_bounds(std::uint64_t N, Engine engine, const FastEngine& fast, unsigned jobs) {
  switch (engine) {
    case Engine::fast:
      return check_bounds(fast.table(N), jobs);
    case Engine::dp: {
      dp::BuildOptions opts;
      opts.jobs = jobs;
      return check_bounds(dp::compute_values(N, opts), jobs);
    }
    default:
      throw std::invalid_argument("check_bounds supports the fast and dp engines only");
  }
}

BoundReport check_window(const ValueTable& values) {
  require_both(values, "check_window");
  BoundReport report;
  report.n_max = values.N;
  for (std::uint64_t n = 0; n <= values.N; ++n) {
    const i64 diff = i64{values.Q[n]} - i64{values.P[n]};
    if (diff < -1 || diff > 2) report.violations.push_back({n, "QP_window", diff, diff < -1 ? -1.0 : 2.0});
  }
  return report;
}

AsymptoticSample check_asymptotic(std::uint64_t n, std::uint64_t P) {
  if (n <= 2) throw std::invalid_argument("check_asymptotic needs n > 2");
  AsymptoticSample s;
  s.n = n;
  s.P = P;
  const double root = sqrt2n(n);
  s.ratio = static_cast<double>(P) / root;
  s.upper = 1 + growth_slack(n);
  // P / sqrt(2n) > 99/100  <=>  (100 P)^2 > 99^2 * 2n
  s.lower_ok = u128{10000} * P * P > u128{9801} * 2 * n;
  s.upper_ok = growth_upper_holds(n, P, /*strict=*/true) == Decision::holds;
  return s;
}

std::string to_json(const BoundReport& report) {
  nlohmann::json j;
  j["n_max"] = report.n_max;
  j["pass"] = report.pass();
  j["violations"] = nlohmann::json::array();
  for (const auto& v : report.violations) {
    j["violations"].push_back({{"n", v.n}, {"bound", v.bound}, {"lhs", v.lhs}, {"rhs", v.rhs}});
  }
  return j.dump();
}

// ---- triangles ----------------------------------------------------------------

std::string to_string(TriangleSeries s) {
  switch (s) {
    case TriangleSeries::P_minus_f: return "P_minus_f";
    case TriangleSeries::Q_minus_f_minus_1: return "Q_minus_f_minus_1";
    case TriangleSeries::FG: return "FG";
    case TriangleSeries::raw_P: return "raw_P";
    case TriangleSeries::raw_Q: return "raw_Q";
  }
  return "?";
}

TriangleSeries triangle_series_from_string(const std::string& s) {
  for (auto t : {TriangleSeries::P_minus_f, TriangleSeries::Q_minus_f_minus_1, TriangleSeries::FG,
                 TriangleSeries::raw_P, TriangleSeries::raw_Q}) {
    if (s == to_string(t)) return t;
  }
  throw std::invalid_argument("unknown triangle series '" + s + "'");
}

std::uint64_t triangle_extent(std::uint64_t row_count) {
  return row_count == 0 ? 0 : triangular(row_count - 1);
}

TriangleArray triangle(const ValueTable& values, TriangleSeries series, std::uint64_t row_count) {
  if (row_count == 0) throw std::invalid_argument("triangle needs at least one row");
  const std::uint64_t extent = triangle_extent(row_count);
  const bool need_p = series == TriangleSeries::P_minus_f || series == TriangleSeries::raw_P;
  const bool need_q = series == TriangleSeries::Q_minus_f_minus_1 || series == TriangleSeries::raw_Q;
  if ((need_p && (!values.has_P() || values.N < extent)) ||
      (need_q && (!values.has_Q() || values.N < extent))) {
    throw std::out_of_range("triangle: values must cover n <= " + std::to_string(extent));
  }
  TriangleArray arr;
  arr.series = series;
  arr.rows.resize(row_count);
  for (std::uint64_t r = 0; r < row_count; ++r) {
    const std::uint64_t first = r == 0 ? 0 : triangular(r - 1) + 1;
    for (std::uint64_t n = first; n <= triangular(r); ++n) {
      TriangleEntry e;
      e.n = n;
      e.f = r;
      e.g = triangular(r) - n;
      switch (series) {
        case TriangleSeries::P_minus_f: e.value = i64{values.P[n]} - i64(r); break;
        case TriangleSeries::Q_minus_f_minus_1: e.value = i64{values.Q[n]} - i64(r) - 1; break;
        case TriangleSeries::raw_P: e.value = values.P[n]; break;
        case TriangleSeries::raw_Q: e.value = values.Q[n]; break;
        case TriangleSeries::FG: break;
      }
      arr.rows[r].push_back(e);
    }
  }
  return arr;
}

BoundReport check_row_reflection(const ValueTable& values, const ExceptionTable& table,
                                 std::uint64_t row_count) {
  require_both(values, "check_row_reflection");
  const auto p_rows = triangle(values, TriangleSeries::P_minus_f, row_count);
  const auto q_rows = triangle(values, TriangleSeries::Q_minus_f_minus_1, row_count);
  BoundReport report;
  report.n_max = triangle_extent(row_count);
  for (std::uint64_t r = 0; r < row_count; ++r) {
    for (std::size_t i = 0; i < p_rows.rows[r].size(); ++i) {
      const auto& pe = p_rows.rows[r][i];
      const auto& qe = q_rows.rows[r][i];
      const std::uint64_t t = pe.g;  // position counted from the right
      const auto* rec = table.find(pe.n);
      if (!(rec && rec->p_identity_fails) && pe.value != i64{values.Q[t]}) {
        report.violations.push_back({pe.n, "P_row_reflection", pe.value, double(values.Q[t])});
      }
      if (!(rec && rec->q_identity_fails) && qe.value != i64{values.P[t]}) {
        report.violations.push_back({qe.n, "Q_row_reflection", qe.value, double(values.P[t])});
      }
    }
  }
  return report;
}

// ---- drift ---------------------------------------------------------------------

std::vector<DriftRow> emit_drift_series(const ValueTable& values, bool want_p) {
  const auto& col = want_p ? values.P : values.Q;
  if (col.empty()) throw std::invalid_argument("emit_drift_series: column not available");
  std::vector<DriftRow> rows;
  rows.reserve(col.size());
  for (std::uint64_t n = 0; n < col.size(); ++n) {
    const i64 f = static_cast<i64>(f_of(n));
    rows.push_back({n, col[n], i64{col[n]} - f - (want_p ? 0 : 1)});
  }
  return rows;
}

void write_drift_csv(std::ostream& os, const std::vector<DriftRow>& rows) {
  os << "n,value,drift\n";
  for (const auto& r : rows) os << r.n << ',' << r.value << ',' << r.drift << '\n';
}

}  // namespace isoperim::analysis
