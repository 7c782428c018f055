#include "isoperim/exceptions.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "isoperim/numeric.hpp"

namespace isoperim {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s = s.substr(pos + 1);
  }
  return out;
}

std::uint64_t field(std::string_view text, std::size_t line, const char* name) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ExceptionTableError("line " + std::to_string(line) + ": field " + name + " ('" +
                                  std::string(text) + "') is not a nonnegative integer",
                              line, std::nullopt);
  }
  return v;
}

// P or Q at m using the identities, stopping at rows whose identity for the
// current function fails.  Only rows with key <= m are consulted.
std::uint64_t identity_value(std::span<const ExceptionRecord> rows, bool want_p,
                             std::uint64_t m) {
  std::uint64_t acc = 0;
  while (m > 0) {
    const auto it = std::lower_bound(rows.begin(), rows.end(), m,
                                     [](const ExceptionRecord& r, std::uint64_t v) { return r.n < v; });
    if (it != rows.end() && it->n == m &&
        (want_p ? it->p_identity_fails : it->q_identity_fails)) {
      return acc + (want_p ? it->P : it->Q);
    }
    const std::uint64_t f = f_of(m);
    acc += f + (want_p ? 0 : 1);
    m = triangular(f) - m;
    want_p = !want_p;
  }
  return acc;
}

}  // namespace

ExceptionTable ExceptionTable::parse(std::string_view csv, std::string source) {
  ExceptionTable table;
  table.source_ = std::move(source);
  std::size_t line_no = 0;
  bool header_seen = false;
  for (std::string_view line : split(csv, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "n,P,Q,p_exc,q_exc") {
        throw ExceptionTableError("line " + std::to_string(line_no) +
                                      ": expected header 'n,P,Q,p_exc,q_exc'",
                                  line_no, std::nullopt);
      }
      header_seen = true;
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 5) {
      throw ExceptionTableError("line " + std::to_string(line_no) + ": expected 5 fields",
                                line_no, std::nullopt);
    }
    ExceptionRecord r;
    r.n = field(cols[0], line_no, "n");
    const auto P = field(cols[1], line_no, "P");
    const auto Q = field(cols[2], line_no, "Q");
    const auto pe = field(cols[3], line_no, "p_exc");
    const auto qe = field(cols[4], line_no, "q_exc");
    if (pe > 1 || qe > 1) {
      throw ExceptionTableError("line " + std::to_string(line_no) + ": flags must be 0 or 1",
                                line_no, r.n);
    }
    if (P > UINT32_MAX || Q > UINT32_MAX) {
      throw ExceptionTableError("line " + std::to_string(line_no) + ": value too large",
                                line_no, r.n);
    }
    r.P = static_cast<std::uint32_t>(P);
    r.Q = static_cast<std::uint32_t>(Q);
    r.p_identity_fails = pe == 1;
    r.q_identity_fails = qe == 1;
    if (!table.records_.empty() && table.records_.back().n >= r.n) {
      throw ExceptionTableError("line " + std::to_string(line_no) + ": rows must be sorted by n",
                                line_no, r.n);
    }
    check_supported(r.n);
    table.records_.push_back(r);
  }
  if (!header_seen) throw ExceptionTableError("empty exception table", 0, std::nullopt);

  // Validate flags against the identities, smallest n first.
  for (std::size_t i = 0; i < table.records_.size(); ++i) {
    const ExceptionRecord& r = table.records_[i];
    const std::string where = "exception table " + table.source_ + ", n = " + std::to_string(r.n);
    if (r.Q < r.P || r.Q - r.P > 2) {
      throw ExceptionTableError(where + ": Q - P outside [0, 2]", 0, r.n);
    }
    const std::uint64_t f = f_of(r.n);
    const std::uint64_t g = triangular(f) - r.n;
    std::uint64_t p_rhs = 0;
    std::uint64_t q_rhs = 0;
    if (g == r.n) {  // only n = 0
      p_rhs = f + r.Q;
      q_rhs = 1 + f + r.P;
    } else {
      const std::span<const ExceptionRecord> below(table.records_.data(), i);
      p_rhs = f + identity_value(below, false, g);
      q_rhs = 1 + f + identity_value(below, true, g);
    }
    if ((r.P != p_rhs) != r.p_identity_fails) {
      throw ExceptionTableError(where + ": p_exc flag disagrees with P = f + Q(g) (rhs " +
                                    std::to_string(p_rhs) + ")",
                                0, r.n);
    }
    if ((r.Q != q_rhs) != r.q_identity_fails) {
      throw ExceptionTableError(where + ": q_exc flag disagrees with Q = 1 + f + P(g) (rhs " +
                                    std::to_string(q_rhs) + ")",
                                0, r.n);
    }
  }
  return table;
}

ExceptionTable ExceptionTable::embedded() {
  const auto csv = detail::embedded_exceptions_csv();
  if (fnv1a64(csv) != kEmbeddedChecksum) {
    throw ExceptionTableError("embedded exception table fails its checksum", 0, std::nullopt);
  }
  return parse(csv, "<embedded>");
}

ExceptionTable ExceptionTable::from_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw ExceptionTableError("cannot open exception table " + path.string(), 0, std::nullopt);
  }
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse(ss.str(), path.string());
}

ExceptionTable ExceptionTable::resolve(const std::optional<std::filesystem::path>& flag) {
  if (flag) return from_file(*flag);
  if (const char* env = std::getenv(kExceptionsEnvVar); env && *env) return from_file(env);
  return embedded();
}

const ExceptionRecord* ExceptionTable::find(std::uint64_t n) const {
  const auto it = std::lower_bound(records_.begin(), records_.end(), n,
                                   [](const ExceptionRecord& r, std::uint64_t v) { return r.n < v; });
  return it != records_.end() && it->n == n ? &*it : nullptr;
}

ExceptionTable::Counts ExceptionTable::counts() const {
  Counts c;
  c.rows = records_.size();
  for (const auto& r : records_) {
    c.p_failures += r.p_identity_fails;
    c.q_failures += r.q_identity_fails;
    c.rows_with_failure += r.p_identity_fails || r.q_identity_fails;
  }
  return c;
}

std::string exceptions_to_csv(std::span<const ExceptionRecord> records) {
  std::string out = "n,P,Q,p_exc,q_exc\n";
  for (const auto& r : records) {
    out += std::to_string(r.n) + ',' + std::to_string(r.P) + ',' + std::to_string(r.Q) + ',' +
           (r.p_identity_fails ? '1' : '0') + ',' + (r.q_identity_fails ? '1' : '0') + '\n';
  }
  return out;
}

std::string ExceptionTable::to_csv() const { return exceptions_to_csv(records_); }

}  // namespace isoperim
