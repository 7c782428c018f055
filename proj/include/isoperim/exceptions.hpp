#pragma once

// The finite list of volumes where P(n) = f(n) + Q(g(n)) or
// Q(n) = 1 + f(n) + P(g(n)) fails.  Stored as CSV:
//
//   n,P,Q,p_exc,q_exc
//   0,0,0,0,1
//   2,2,4,1,0
//   ...
//
// p_exc / q_exc mark which identity fails at n.  Rows where only one flag is
// set still carry both values.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace isoperim {

struct ExceptionRecord {
  std::uint64_t n = 0;
  std::uint32_t P = 0;
  std::uint32_t Q = 0;
  bool p_identity_fails = false;
  bool q_identity_fails = false;

  friend bool operator==(const ExceptionRecord&, const ExceptionRecord&) = default;
};

/// Parse or validation failure.  `line` is 1-based (0 when not tied to a
/// line); `n` names the offending row when known.
class ExceptionTableError : public std::runtime_error {
 public:
  ExceptionTableError(const std::string& what, std::size_t line, std::optional<std::uint64_t> n)
      : std::runtime_error(what), line(line), n(n) {}
  std::size_t line;
  std::optional<std::uint64_t> n;
};

/// Environment variable naming an override CSV.
inline constexpr const char* kExceptionsEnvVar = "ISOPERIM_EXCEPTIONS";

/// FNV-1a over the embedded CSV bytes.
inline constexpr std::uint64_t kEmbeddedChecksum = 0xa21d9b3df5c1e073ULL;

std::uint64_t fnv1a64(std::string_view bytes);

class ExceptionTable {
 public:
  /// Parses and validates.  Every row's flags are recomputed from the
  /// identities, evaluating the right-hand sides on smaller volumes through
  /// the rows already read; a mismatch or 0 <= Q - P <= 2 failing is an error.
  static ExceptionTable parse(std::string_view csv, std::string source = "<memory>");

  static ExceptionTable embedded();
  static ExceptionTable from_file(const std::filesystem::path& path);

  /// Flag path if given, else $ISOPERIM_EXCEPTIONS if set, else embedded.
  static ExceptionTable resolve(const std::optional<std::filesystem::path>& flag);

  const ExceptionRecord* find(std::uint64_t n) const;
  std::span<const ExceptionRecord> records() const { return records_; }
  std::uint64_t max_n() const { return records_.empty() ? 0 : records_.back().n; }
  const std::string& source() const { return source_; }

  struct Counts {
    std::size_t rows = 0;
    std::size_t rows_with_failure = 0;
    std::size_t p_failures = 0;
    std::size_t q_failures = 0;
    std::size_t failing_flags() const { return p_failures + q_failures; }
  };
  Counts counts() const;

  std::string to_csv() const;

 private:
  std::vector<ExceptionRecord> records_;
  std::string source_;
};

/// Serializes records in the table format (header included).
std::string exceptions_to_csv(std::span<const ExceptionRecord> records);

namespace detail {
std::string_view embedded_exceptions_csv();
}

}  // namespace isoperim
