#pragma once

// Verification suites over value tables and data for the triangle arrays
// and drift plots.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "isoperim/dp.hpp"
#include "isoperim/exceptions.hpp"
#include "isoperim/fast.hpp"

namespace isoperim::analysis {

// ---- exception regeneration ------------------------------------------------

/// Every n <= values.N where P[n] != f + Q[g] or Q[n] != 1 + f + P[g].
std::vector<ExceptionRecord> flag_exceptions(const ValueTable& values);

/// flag_exceptions over a fresh dp table for [0, N].
std::vector<ExceptionRecord> regenerate_exceptions(std::uint64_t N,
                                                   const dp::BuildOptions& options = {});

struct ExceptionDiff {
  std::uint64_t N = 0;
  std::vector<std::uint64_t> missing;          // in the table, not regenerated
  std::vector<std::uint64_t> extra;            // regenerated, not in the table
  std::vector<std::uint64_t> flag_mismatch;    // both, but different flags
  std::vector<std::uint64_t> value_mismatch;   // both, but different P or Q
  bool empty() const {
    return missing.empty() && extra.empty() && flag_mismatch.empty() && value_mismatch.empty();
  }
};

/// Compares regenerated records with the table rows having n <= N.
ExceptionDiff diff_exceptions(const std::vector<ExceptionRecord>& regenerated,
                              const ExceptionTable& table, std::uint64_t N);

// ---- bounds ----------------------------------------------------------------

struct Violation {
  std::uint64_t n = 0;
  std::string bound;
  std::int64_t lhs = 0;
  double rhs = 0;  // for display; the check itself is exact or outward-rounded
};

struct BoundReport {
  std::uint64_t n_max = 0;
  std::vector<Violation> violations;
  bool pass() const { return violations.empty(); }
};

std::string to_json(const BoundReport& report);

/// Bound names used in reports:
///   P_sqrt_lower       sqrt(2n) - 1/2 < P(n)
///   Q_sqrt_lower       sqrt(2n) + 1/2 < Q(n)
///   P_row_lower        f(n) <= P(n)
///   Q_row_lower        f(n) + 1 <= Q(n)
///   P_identity_upper   P(n) <= f(n) + Q(g(n))
///   Q_identity_upper   Q(n) <= 1 + f(n) + P(g(n))
///   P_growth_upper     P(n) <= sqrt(2n) + (2^(3/4) n^(1/4) + 1)(log2 log2(n/2) - 1) + 7,  n > 2
///   Q_growth_upper     same right-hand side for Q
///   P_orbit_lower      P(n) >= f + min{Q(g), sqrt(2(g+f+1)) + 3/2, f - 2},  n >= 2
///   Q_orbit_lower      Q(n) >= 1 + f + min{P(g), sqrt(2(g+f+1)) + 1/2},    n >= 2
///   QP_window          -1 <= Q(n) - P(n) <= 2
/// All square-root comparisons are squared into integer predicates.  The
/// growth bound is evaluated in double with a safety margin and escalated to
/// MPFR interval arithmetic near the edge; an undecided comparison counts as
/// a violation.
BoundReport check_bounds(const ValueTable& values, unsigned jobs = 1);

/// Builds [0, N] with the chosen engine (fast or dp) and checks it.
BoundReport check_bounds(std::uint64_t N, Engine engine, const FastEngine& fast,
                         unsigned jobs = 1);

/// -1 <= Q(n) - P(n) <= 2 over the whole table, n = 0 included.
BoundReport check_window(const ValueTable& values);

enum class Decision { holds, fails, undecided };

/// Whether lhs <= sqrt(2n) + (2^(3/4) n^(1/4) + 1)(log2 log2(n/2) - 1) + 7
/// (strict when `strict`), n > 2.
Decision growth_upper_holds(std::uint64_t n, std::uint64_t lhs, bool strict = false);

/// Approximate value of the growth bound's right-hand side and of its slack
/// term u(n) = (rhs - sqrt(2n)) / sqrt(2n).
double growth_upper_value(std::uint64_t n);
double growth_slack(std::uint64_t n);

struct AsymptoticSample {
  std::uint64_t n = 0;
  std::uint64_t P = 0;
  double ratio = 0;   // P / sqrt(2n)
  double upper = 0;   // 1 + u(n)
  bool lower_ok = false;
  bool upper_ok = false;
};

/// P(n)/sqrt(2n) > 1 - 1/100 (exact) and P(n)/sqrt(2n) < 1 + u(n).
AsymptoticSample check_asymptotic(std::uint64_t n, std::uint64_t P);

// ---- triangle arrays -------------------------------------------------------

enum class TriangleSeries { P_minus_f, Q_minus_f_minus_1, FG, raw_P, raw_Q };

std::string to_string(TriangleSeries s);
TriangleSeries triangle_series_from_string(const std::string& s);

struct TriangleEntry {
  std::uint64_t n = 0;
  std::uint64_t f = 0;
  std::uint64_t g = 0;
  std::int64_t value = 0;  // unused for FG
};

/// Row r holds the n with f(n) = r in increasing order, i.e. T_{r-1}+1..T_r.
/// Row 0 is {0} and row 1 is {1}.
struct TriangleArray {
  TriangleSeries series = TriangleSeries::raw_P;
  std::vector<std::vector<TriangleEntry>> rows;
};

/// Values needed up to T_{row_count - 1}; throws std::out_of_range otherwise.
TriangleArray triangle(const ValueTable& values, TriangleSeries series, std::uint64_t row_count);

/// Number of values a table must cover for `row_count` triangle rows.
std::uint64_t triangle_extent(std::uint64_t row_count);

/// Entry t from the right of row r of {P - f} equals Q(t), and of
/// {Q - f - 1} equals P(t), skipping n whose identity is flagged in `table`.
BoundReport check_row_reflection(const ValueTable& values, const ExceptionTable& table,
                                 std::uint64_t row_count);

// ---- drift series ----------------------------------------------------------

struct DriftRow {
  std::uint64_t n = 0;
  std::uint64_t value = 0;
  std::int64_t drift = 0;  // P - f or Q - f - 1
};

/// `want_p` selects P(n) - f(n), otherwise Q(n) - f(n) - 1.
std::vector<DriftRow> emit_drift_series(const ValueTable& values, bool want_p);

/// Header "n,value,drift" followed by one line per row.
void write_drift_csv(std::ostream& os, const std::vector<DriftRow>& rows);

}  // namespace isoperim::analysis
