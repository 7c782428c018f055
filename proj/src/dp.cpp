#include "isoperim/dp.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <limits>
#include <span>
#include <thread>
#include <utility>

#include "isoperim/kernels.hpp"
#include "isoperim/numeric.hpp"

namespace isoperim {

std::string to_string(Engine e) {
  switch (e) {
    case Engine::oracle: return "brute";
    case Engine::dp: return "dp";
    case Engine::fast: return "fast";
    case Engine::direct: return "direct";
  }
  return "unknown";
}

Engine engine_from_string(const std::string& s) {
  if (s == "brute" || s == "oracle") return Engine::oracle;
  if (s == "dp") return Engine::dp;
  if (s == "fast") return Engine::fast;
  if (s == "direct") return Engine::direct;
  throw std::invalid_argument("unknown engine '" + s + "'");
}

MemoryBudgetExceeded::MemoryBudgetExceeded(std::uint64_t attempted, std::uint64_t budget)
    : std::runtime_error("dp: tables need about " + std::to_string(attempted) +
                         " bytes, over the memory budget of " + std::to_string(budget) +
                         " bytes"),
      attempted_bytes(attempted),
      budget_bytes(budget) {}

namespace dp {

namespace {

using i64 = std::int64_t;
using i32 = std::int32_t;

constexpr ExtendedValue kInfinity = ExtendedValue::infinity();

i64 tri(i64 k) { return k * (k + 1) / 2; }

[[noreturn]] void coverage_error(const char* fn, i64 n, i64 k, std::uint64_t N) {
  throw TableCoverageError(std::string("dp: ") + fn + "(" + std::to_string(n) + "; " +
                           std::to_string(k) + ") needs volume " + std::to_string(n) +
                           " but the tables cover 0.." + std::to_string(N));
}

template <class Body>
void parallel_for(i64 lo, i64 hi, unsigned jobs, Body&& body) {
  const i64 count = hi - lo;
  if (jobs <= 1 || count < 4096) {
    for (i64 i = lo; i < hi; ++i) body(i);
    return;
  }
  const i64 chunk = (count + jobs - 1) / jobs;
  std::vector<std::jthread> workers;
  for (i64 start = lo; start < hi; start += chunk) {
    const i64 stop = std::min(hi, start + chunk);
    workers.emplace_back([&body, start, stop] {
      for (i64 i = start; i < stop; ++i) body(i);
    });
  }
}

// Step rows with a shared width that grows on demand.
class StepStore {
 public:
  void reset(std::uint64_t rows, i32 width) {
    rows_ = rows;
    width_ = width;
    data_.assign(rows * 2 * static_cast<std::uint64_t>(width), 0);
    for (std::uint64_t m = 0; m < rows; ++m) pad(m, 0);
  }

  void set_row(std::uint64_t m, std::span<const std::pair<i32, i32>> steps) {
    if (static_cast<i32>(steps.size()) > width_) grow(static_cast<i32>(steps.size()));
    i32* row = data_.data() + m * 2 * width_;
    for (std::size_t s = 0; s < steps.size(); ++s) {
      row[s] = steps[s].first;
      row[width_ + s] = steps[s].second;
    }
    pad(m, steps.size());
  }

  kernels::StepRows view() const {
    return {data_.data(), width_, static_cast<i32>(rows_)};
  }

  ExtendedValue lookup(i64 m, i64 j) const {
    const i32 jj = static_cast<i32>(std::clamp<i64>(j, std::numeric_limits<i32>::min(),
                                                    std::numeric_limits<i32>::max() - 1));
    return ExtendedValue::from_raw(kernels::step_lookup(view(), m, jj));
  }

  i32 width() const { return width_; }
  std::uint64_t bytes() const { return data_.size() * sizeof(i32); }

 private:
  void pad(std::uint64_t m, std::size_t from) {
    i32* row = data_.data() + m * 2 * width_;
    for (auto s = static_cast<i32>(from); s < width_; ++s) {
      row[s] = std::numeric_limits<i32>::max();
      row[width_ + s] = kernels::kInf;
    }
  }

  void grow(i32 width) {
    std::vector<i32> next(rows_ * 2 * static_cast<std::uint64_t>(width));
    for (std::uint64_t m = 0; m < rows_; ++m) {
      const i32* src = data_.data() + m * 2 * width_;
      i32* dst = next.data() + m * 2 * width;
      for (i32 s = 0; s < width; ++s) {
        dst[s] = s < width_ ? src[s] : std::numeric_limits<i32>::max();
        dst[width + s] = s < width_ ? src[width_ + s] : kernels::kInf;
      }
    }
    data_ = std::move(next);
    width_ = width;
  }

  std::uint64_t rows_ = 0;
  i32 width_ = 0;
  std::vector<i32> data_;
};

}  // namespace

class HelperTables::Impl {
 public:
  Impl(std::uint64_t N, Layout layout) : N_(N), layout_(layout) {}
  virtual ~Impl() = default;

  // Interior cells only: 1 <= n <= N and 1 <= k <= n for p and q,
  // 2 <= k < n for sigma.
  virtual ExtendedValue p_cell(i64 n, i64 k) const = 0;
  virtual ExtendedValue q_cell(i64 n, i64 k) const = 0;
  virtual ExtendedValue sigma_cell(i64 n, i64 k) const = 0;
  virtual std::uint64_t footprint() const = 0;
  virtual int step_width() const { return 0; }

  ExtendedValue p(i64 n, i64 k) const {
    if (n < 0) return kInfinity;
    if (n == 0) return ExtendedValue::finite(0);
    if (k <= 0) return kInfinity;
    if (static_cast<std::uint64_t>(n) > N_) coverage_error("p", n, k, N_);
    return p_cell(n, std::min(k, n));
  }

  ExtendedValue q(i64 n, i64 k) const {
    if (n < 0) return kInfinity;
    if (n == 0) return ExtendedValue::finite(0);
    if (k <= 0) return kInfinity;
    if (static_cast<std::uint64_t>(n) > N_) coverage_error("q", n, k, N_);
    return q_cell(n, std::min(k, n));
  }

  ExtendedValue sigma(i64 n, i64 k) const {
    if (n < 0 || k < 0 || k > n) return kInfinity;
    if (n == 0) return ExtendedValue::finite(0);  // k == 0 here
    if (static_cast<std::uint64_t>(n) > N_) coverage_error("sigma", n, k, N_);
    if (k == n) return ExtendedValue::finite(2 * n);
    if (k <= 1) return kInfinity;
    return sigma_cell(n, k);
  }

  // sigma(n;k) = k+1 + min{ k-1 + q(n-k; k-3), sigma(n-k; k-2), sigma(n-k; k-1) - k }
  // for 2 <= k < n.
  ExtendedValue sigma_recurrence(i64 n, i64 k) const {
    const ExtendedValue none_below = q(n - k, k - 3) + (k - 1);
    const ExtendedValue skip_one = sigma(n - k, k - 2);
    const ExtendedValue run_on = sigma(n - k, k - 1) - k;
    return min(min(none_below, skip_one), run_on) + (k + 1);
  }

  std::uint64_t N_;
  Layout layout_;
};

namespace {

class DenseImpl final : public HelperTables::Impl {
 public:
  explicit DenseImpl(std::uint64_t N) : Impl(N, Layout::dense) {
    const std::uint64_t cells = (N + 1) * (N + 2) / 2;
    p_.assign(cells, ExtendedValue::infinity());
    q_.assign(cells, ExtendedValue::infinity());
    s_.assign(cells, ExtendedValue::infinity());
  }

  ExtendedValue p_cell(i64 n, i64 k) const override { return p_[at(n, k)]; }
  ExtendedValue q_cell(i64 n, i64 k) const override { return q_[at(n, k)]; }
  ExtendedValue sigma_cell(i64 n, i64 k) const override { return s_[at(n, k)]; }

  std::uint64_t footprint() const override {
    return 3 * p_.size() * sizeof(ExtendedValue);
  }

  void fill_row(i64 n, unsigned jobs) {
    // sigma and q
    parallel_for(2, n, jobs, [&](i64 k) { s_[at(n, k)] = sigma_recurrence(n, k); });
    s_[at(n, n)] = ExtendedValue::finite(2 * n);
    ExtendedValue run = kInfinity;
    for (i64 k = 1; k <= n; ++k) {
      run = min(run, s_[at(n, k)]);
      q_[at(n, k)] = run;
    }

    // p by the partition on the top run {l, ..., k} of the set.
    ExtendedValue best = kInfinity;
    for (i64 k = 1; k <= n; ++k) {
      best = min(best, p(n - k, k - 2) + k);
      for (i64 l = k - 1; l >= 0; --l) {
        const i64 m = n - tri(k) + tri(l - 1);
        if (m < 0) break;
        best = min(best, p(m, l - 2) + (k + l));
      }
      p_[at(n, k)] = best;
    }
  }

 private:
  static std::uint64_t at(i64 n, i64 k) {
    return static_cast<std::uint64_t>(n) * (n + 1) / 2 + static_cast<std::uint64_t>(k);
  }

  std::vector<ExtendedValue> p_, q_, s_;
};

class CompactImpl final : public HelperTables::Impl {
 public:
  explicit CompactImpl(std::uint64_t N) : Impl(N, Layout::compact) {
    p_rows_.reset(N + 1, 2);
    q_rows_.reset(N + 1, 2);
    const std::array<std::pair<i32, i32>, 1> zero{{{std::numeric_limits<i32>::min(), 0}}};
    p_rows_.set_row(0, zero);
    q_rows_.set_row(0, zero);
    band_lo_.assign(N + 1, 0);
    band_off_.assign(N + 2, 0);
    for (std::uint64_t n = 0; n <= N; ++n) {
      const auto [lo, hi] = band(static_cast<i64>(n));
      band_lo_[n] = static_cast<i32>(lo);
      band_off_[n + 1] = band_off_[n] + static_cast<std::uint64_t>(std::max<i64>(0, hi - lo + 1));
    }
    band_.assign(band_off_[N + 1], kernels::kInf);
  }

  // Stored sigma cells: f(n) <= k <= min(n-1, (n+2)/2).  Below f(n) nothing
  // fits; above (n+2)/2 both sigma terms of the recurrence are infinite.
  static std::pair<i64, i64> band(i64 n) {
    if (n < 3) return {2, 1};  // empty
    const i64 lo = std::max<i64>(2, static_cast<i64>(f_of(static_cast<std::uint64_t>(n))));
    const i64 hi = std::min<i64>(n - 1, (n + 2) / 2);
    return {lo, hi};
  }

  static std::uint64_t band_cells(std::uint64_t N) {
    std::uint64_t cells = 0;
    for (std::uint64_t n = 0; n <= N; ++n) {
      const auto [lo, hi] = band(static_cast<i64>(n));
      cells += static_cast<std::uint64_t>(std::max<i64>(0, hi - lo + 1));
    }
    return cells;
  }

  ExtendedValue p_cell(i64 n, i64 k) const override { return p_rows_.lookup(n, k); }
  ExtendedValue q_cell(i64 n, i64 k) const override { return q_rows_.lookup(n, k); }

  ExtendedValue sigma_cell(i64 n, i64 k) const override {
    if (k < band_lo_[n]) return kInfinity;
    const i64 width = static_cast<i64>(band_off_[n + 1] - band_off_[n]);
    if (k - band_lo_[n] < width) {
      return ExtendedValue::from_raw(band_[band_off_[n] + (k - band_lo_[n])]);
    }
    return q(n - k, k - 3) + 2 * k;
  }

  std::uint64_t footprint() const override {
    return band_.size() * sizeof(i32) + p_rows_.bytes() + q_rows_.bytes() +
           band_off_.size() * sizeof(std::uint64_t) + band_lo_.size() * sizeof(i32);
  }

  int step_width() const override { return std::max(p_rows_.width(), q_rows_.width()); }

  void fill_row(i64 n, unsigned jobs) {
    const std::uint64_t off = band_off_[n];
    const i64 lo = band_lo_[n];
    const i64 width = static_cast<i64>(band_off_[n + 1] - off);
    parallel_for(0, width, jobs, [&](i64 i) {
      band_[off + i] = sigma_recurrence(n, lo + i).raw();
    });

    // q(n; .) is the running minimum of sigma(n; .); sigma(n;k) >= k+1, so
    // the row is final once k+1 reaches the running minimum.
    steps_.clear();
    ExtendedValue run = kInfinity;
    for (i64 k = 1; k <= n; ++k) {
      if (run.is_finite() && k + 1 >= run.value()) break;
      const ExtendedValue s = sigma(n, k);
      if (s < run) {
        run = s;
        steps_.emplace_back(static_cast<i32>(k), s.raw());
      }
    }
    q_rows_.set_row(n, steps_);

    // Every candidate at index k is at least k, so stop once k reaches the
    // running minimum.
    steps_.clear();
    run = kInfinity;
    const auto& kern = kernels::active_kernels();
    for (i64 k = static_cast<i64>(f_of(static_cast<std::uint64_t>(n))); k <= n; ++k) {
      if (run.is_finite() && k >= run.value()) break;
      ExtendedValue cand = p(n - k, k - 2) + k;
      const i64 base = n - tri(k);
      // Smallest l with base + T_{l-1} >= 0.
      const i64 l_lo = base >= 0 ? 0 : static_cast<i64>(f_of(static_cast<std::uint64_t>(-base))) + 1;
      if (l_lo <= k - 1) {
        const auto rows = p_rows_.view();
        const i32 inner = (k < 46000 && base > -(i64{1} << 30))
                              ? kern.inner_min(rows, base, static_cast<i32>(l_lo),
                                               static_cast<i32>(k - 1))
                              : kernels::scalar_kernels().inner_min(
                                    rows, base, static_cast<i32>(l_lo), static_cast<i32>(k - 1));
        cand = min(cand, ExtendedValue::from_raw(inner) + k);
      }
      if (cand < run) {
        run = cand;
        steps_.emplace_back(static_cast<i32>(k), cand.raw());
      }
    }
    p_rows_.set_row(n, steps_);
  }

 private:
  StepStore p_rows_;
  StepStore q_rows_;
  std::vector<i32> band_;
  std::vector<std::uint64_t> band_off_;
  std::vector<i32> band_lo_;
  std::vector<std::pair<i32, i32>> steps_;
};

}  // namespace

HelperTables::HelperTables(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
HelperTables::HelperTables(HelperTables&&) noexcept = default;
HelperTables& HelperTables::operator=(HelperTables&&) noexcept = default;
HelperTables::~HelperTables() = default;

std::uint64_t HelperTables::estimate_footprint(std::uint64_t N, Layout layout) {
  if (layout == Layout::dense) {
    return 3 * ((N + 1) * (N + 2) / 2) * sizeof(ExtendedValue);
  }
  // Step rows are assumed four wide; they rarely need more than two.
  return CompactImpl::band_cells(N) * sizeof(std::int32_t) +
         2 * (N + 1) * 8 * sizeof(std::int32_t) + (N + 2) * 12;
}

HelperTables HelperTables::build(std::uint64_t N, const BuildOptions& options) {
  if (N >= static_cast<std::uint64_t>(kernels::kInf) / 4) {
    throw std::out_of_range("dp: range " + std::to_string(N) + " is too large");
  }
  const std::uint64_t need = estimate_footprint(N, options.layout);
  if (need > options.memory_budget) throw MemoryBudgetExceeded(need, options.memory_budget);

  const unsigned jobs = std::max(1u, options.jobs);
  if (options.layout == Layout::dense) {
    auto impl = std::make_unique<DenseImpl>(N);
    for (std::uint64_t n = 1; n <= N; ++n) impl->fill_row(static_cast<i64>(n), jobs);
    return HelperTables(std::move(impl));
  }
  auto impl = std::make_unique<CompactImpl>(N);
  for (std::uint64_t n = 1; n <= N; ++n) impl->fill_row(static_cast<i64>(n), jobs);
  return HelperTables(std::move(impl));
}

ExtendedValue HelperTables::p(std::int64_t n, std::int64_t k) const { return impl_->p(n, k); }
ExtendedValue HelperTables::sigma(std::int64_t n, std::int64_t k) const {
  return impl_->sigma(n, k);
}
ExtendedValue HelperTables::q(std::int64_t n, std::int64_t k) const { return impl_->q(n, k); }
std::uint64_t HelperTables::N() const { return impl_->N_; }
Layout HelperTables::layout() const { return impl_->layout_; }
std::uint64_t HelperTables::footprint_bytes() const { return impl_->footprint(); }
int HelperTables::step_width() const { return impl_->step_width(); }

std::vector<std::uint32_t> compute_P_range(const HelperTables& tables) {
  std::vector<std::uint32_t> P(tables.N() + 1, 0);
  for (std::uint64_t n = 1; n <= tables.N(); ++n) {
    const auto nn = static_cast<std::int64_t>(n);
    const ExtendedValue v = min(tables.p(nn, nn - 1), ExtendedValue::finite(nn));
    P[n] = static_cast<std::uint32_t>(v.value());
  }
  return P;
}

std::vector<std::uint32_t> compute_Q_range(const HelperTables& tables) {
  std::vector<std::uint32_t> Q(tables.N() + 1, 0);
  for (std::uint64_t n = 1; n <= tables.N(); ++n) {
    const auto nn = static_cast<std::int64_t>(n);
    // q(n; n) is the minimum of sigma(n; l) over 1 <= l <= n.
    Q[n] = static_cast<std::uint32_t>(tables.q(nn, nn).value());
  }
  return Q;
}

ValueTable compute_values(std::uint64_t N, const BuildOptions& options) {
  const HelperTables tables = HelperTables::build(N, options);
  ValueTable t;
  t.N = N;
  t.P = compute_P_range(tables);
  t.Q = compute_Q_range(tables);
  t.engine = Engine::dp;
  return t;
}

std::uint64_t direct_P(const HelperTables& tables, std::uint64_t n,
                       std::optional<std::uint64_t> pruning_cap) {
  if (n < 2) throw std::invalid_argument("direct_P needs n >= 2");
  std::uint64_t best = pruning_cap.value_or(n);
  // Terms with m < f(n) have negative volume; every term is at least m.
  for (std::uint64_t m = f_of(n); m < best; ++m) {
    const auto x = static_cast<std::int64_t>(triangular(m) - n);
    const auto mm = static_cast<std::int64_t>(m);
    const ExtendedValue term = min(tables.q(x, mm - 2) + mm, tables.sigma(x, mm - 1));
    if (term.is_finite() && static_cast<std::uint64_t>(term.value()) < best) {
      best = static_cast<std::uint64_t>(term.value());
    }
  }
  return best;
}

std::uint64_t direct_Q(const HelperTables& tables, std::uint64_t n,
                       std::optional<std::uint64_t> pruning_cap) {
  if (n < 2) throw std::invalid_argument("direct_Q needs n >= 2");
  std::uint64_t best = pruning_cap.value_or(2 * n);
  for (std::uint64_t m = f_of(n); m + 1 < best; ++m) {
    const auto x = static_cast<std::int64_t>(triangular(m) - n);
    const auto mm = static_cast<std::int64_t>(m);
    const ExtendedValue term = tables.p(x, mm - 1) + (mm + 1);
    if (term.is_finite() && static_cast<std::uint64_t>(term.value()) < best) {
      best = static_cast<std::uint64_t>(term.value());
    }
  }
  return best;
}

namespace {

constexpr std::array<char, 6> kMagic{'I', 'S', 'O', 'P', '1', '\n'};

void put_le(std::ostream& os, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(std::istream& is, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = is.get();
    if (c == std::char_traits<char>::eof()) throw std::runtime_error("cache: truncated file");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

}  // namespace

void write_cache(const std::filesystem::path& path, const ValueTable& table) {
  if (table.P.size() != table.N + 1 || table.Q.size() != table.N + 1) {
    throw std::invalid_argument("cache: table must carry both P and Q for 0..N");
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cache: cannot open " + path.string());
  os.write(kMagic.data(), kMagic.size());
  os.put(static_cast<char>(table.engine));
  put_le(os, table.N, 8);
  for (auto v : table.P) put_le(os, v, 4);
  for (auto v : table.Q) put_le(os, v, 4);
  if (!os) throw std::runtime_error("cache: write failed for " + path.string());
}

ValueTable read_cache(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cache: cannot open " + path.string());
  std::array<char, 6> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw std::runtime_error("cache: bad magic in " + path.string());
  ValueTable t;
  const auto tag = get_le(is, 1);
  if (tag > static_cast<std::uint64_t>(Engine::direct)) {
    throw std::runtime_error("cache: unknown engine tag");
  }
  t.engine = static_cast<Engine>(tag);
  t.N = get_le(is, 8);
  if (t.N > (std::uint64_t{1} << 32)) throw std::runtime_error("cache: implausible N");
  t.P.resize(t.N + 1);
  t.Q.resize(t.N + 1);
  for (auto& v : t.P) v = static_cast<std::uint32_t>(get_le(is, 4));
  for (auto& v : t.Q) v = static_cast<std::uint32_t>(get_le(is, 4));
  if (is.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error("cache: trailing bytes in " + path.string());
  }
  return t;
}

}  // namespace dp
}  // namespace isoperim
