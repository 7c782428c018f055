#pragma once

// Exact P(n) and Q(n) over a range by dynamic programming on the restricted
// minima
//   p(n;k)     min perimeter over subsets of {0..k} with volume n
//   q(n;k)     min complement perimeter over the same subsets
//   sigma(n;k) as q, but k must be in the set.
//
// Two storage layouts are provided.  `dense` keeps every cell 0 <= k <= n
// and fills it with the literal recurrences; it is the reference.  `compact`
// stores p and q as monotone step rows (a row rarely has more than two
// finite values), keeps sigma only on the band f(n) <= k <= (n+2)/2 where
// it has no closed form, and stops a row as soon as k passes its running
// minimum.  Both must answer every query identically.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "isoperim/extended.hpp"

namespace isoperim {

enum class Engine : std::uint8_t { oracle = 0, dp = 1, fast = 2, direct = 3 };

std::string to_string(Engine e);
Engine engine_from_string(const std::string& s);

/// P[0..N] and Q[0..N] with the engine that produced them.  A table built
/// for only one function leaves the other vector empty.
struct ValueTable {
  std::uint64_t N = 0;
  std::vector<std::uint32_t> P;
  std::vector<std::uint32_t> Q;
  Engine engine = Engine::dp;

  bool has_P() const { return !P.empty(); }
  bool has_Q() const { return !Q.empty(); }
};

/// Thrown when a build would exceed the configured memory budget.
class MemoryBudgetExceeded : public std::runtime_error {
 public:
  MemoryBudgetExceeded(std::uint64_t attempted, std::uint64_t budget);
  std::uint64_t attempted_bytes;
  std::uint64_t budget_bytes;
};

/// Thrown when a query needs a cell beyond the range the tables were built for.
class TableCoverageError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

namespace dp {

enum class Layout { dense, compact };

struct BuildOptions {
  Layout layout = Layout::compact;
  unsigned jobs = 1;
  std::uint64_t memory_budget = std::uint64_t{4} << 30;
};

inline constexpr std::uint64_t kDefaultRange = 2000;
inline constexpr std::uint64_t kExtendedRange = 25000;

class HelperTables {
 public:
  /// Fills p, sigma and q for every volume 0..N.  Throws
  /// MemoryBudgetExceeded before allocating if the estimate is too large.
  static HelperTables build(std::uint64_t N, const BuildOptions& options = {});

  static std::uint64_t estimate_footprint(std::uint64_t N, Layout layout);

  HelperTables(HelperTables&&) noexcept;
  HelperTables& operator=(HelperTables&&) noexcept;
  ~HelperTables();

  // Queries accept any integer arguments; out-of-domain cells follow the
  // boundary conditions (infinite for negative volume, zero for volume 0
  // where applicable).  Volumes above N throw TableCoverageError.
  ExtendedValue p(std::int64_t n, std::int64_t k) const;
  ExtendedValue sigma(std::int64_t n, std::int64_t k) const;
  ExtendedValue q(std::int64_t n, std::int64_t k) const;

  std::uint64_t N() const;
  Layout layout() const;
  std::uint64_t footprint_bytes() const;

  /// Widest step row seen in the compact layout (0 for dense).
  int step_width() const;

  class Impl;

 private:
  explicit HelperTables(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

/// P(n) = min{p(n; n-1), n}, P(0) = 0.
std::vector<std::uint32_t> compute_P_range(const HelperTables& tables);
/// Q(n) = min over 1 <= l <= n of sigma(n; l), Q(0) = 0.
std::vector<std::uint32_t> compute_Q_range(const HelperTables& tables);

/// Builds the helper tables and returns both columns.
ValueTable compute_values(std::uint64_t N, const BuildOptions& options = {});

/// P(n) = min over m of { m + q(T_m - n; m-2), sigma(T_m - n; m-1) }, n >= 2.
/// `pruning_cap` must be a valid upper bound on P(n) when given (default n).
std::uint64_t direct_P(const HelperTables& tables, std::uint64_t n,
                       std::optional<std::uint64_t> pruning_cap = std::nullopt);

/// Q(n) = 1 + min over m of { m + p(T_m - n; m-1) }, n >= 2.
/// `pruning_cap` must be a valid upper bound on Q(n) when given (default 2n).
std::uint64_t direct_Q(const HelperTables& tables, std::uint64_t n,
                       std::optional<std::uint64_t> pruning_cap = std::nullopt);

// Binary cache: "ISOP1\n", engine byte, u64 N, (N+1) x u32 P, (N+1) x u32 Q,
// all little-endian.  Both columns must be present.  The cache only saves
// time; nothing reads it unless asked to.
void write_cache(const std::filesystem::path& path, const ValueTable& table);
ValueTable read_cache(const std::filesystem::path& path);

}  // namespace dp
}  // namespace isoperim
