// isoperim: command-line front end.  Exit codes: 0 success, 1 computation or
// verification failure, 2 usage error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "isoperim/analysis.hpp"
#include "isoperim/dp.hpp"
#include "isoperim/exceptions.hpp"
#include "isoperim/fast.hpp"
#include "isoperim/numeric.hpp"
#include "isoperim/oracle.hpp"
#include "verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace isoperim;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A failure inside one module; the message is prefixed with its name.
struct ModuleError : std::runtime_error {
  ModuleError(const std::string& module, const std::string& what)
      : std::runtime_error(module + ": " + what) {}
};

template <class F>
auto in_module(const char* module, F&& fn) {
  try {
    return fn();
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw ModuleError(module, e.what());
  }
}

const char* module_of(Engine e) {
  switch (e) {
    case Engine::oracle: return "oracle";
    case Engine::dp:
    case Engine::direct: return "dp_engine";
    case Engine::fast: return "fast_engine";
  }
  return "cli";
}

struct Config {
  std::string engine = "fast";
  std::string fn = "both";
  std::string format = "text";
  std::optional<std::string> exceptions_file;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t memory_budget = std::uint64_t{4} << 30;
  std::optional<std::string> cache;

  std::uint64_t n = 0;
  std::uint64_t max = 2000;
  std::uint64_t offset = 1;
  std::uint64_t rows = 10;
  std::string series = "P_minus_f";
  std::optional<std::uint64_t> regenerate;
  std::vector<std::string> cross;
  std::vector<std::string> suites;
  std::uint64_t bounds_max = 1000000;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
};

Engine parse_engine(const std::string& s) {
  try {
    return engine_from_string(s);
  } catch (const std::exception&) {
    throw UsageError("unknown engine '" + s + "' (expected fast, dp, brute or direct)");
  }
}

dp::BuildOptions build_options(const Config& c) {
  dp::BuildOptions b;
  b.jobs = c.jobs;
  b.memory_budget = c.memory_budget;
  return b;
}

// Up-front range validation for the engine.
void validate_range(Engine e, std::uint64_t N, const Config& c) {
  if (e == Engine::oracle && N > oracle::kDefaultCeiling) {
    throw UsageError("brute engine is limited to n <= " + std::to_string(oracle::kDefaultCeiling));
  }
  if (e == Engine::dp || e == Engine::direct) {
    const auto need = dp::HelperTables::estimate_footprint(N, dp::Layout::compact);
    if (need > c.memory_budget) {
      throw UsageError("dp tables for N = " + std::to_string(N) + " need about " + std::to_string(need) +
                       " bytes, over the memory budget of " + std::to_string(c.memory_budget));
    }
  }
  if (N > kMaxSupportedN) throw UsageError("n exceeds the supported ceiling");
}

ValueTable values(Engine e, std::uint64_t N, const Config& c, const FastEngine& fast) {
  validate_range(e, N, c);
  if (e == Engine::dp && c.cache) {
    const fs::path path(*c.cache);
    if (fs::exists(path)) {
      auto t = in_module("dp_engine", [&] { return dp::read_cache(path); });
      if (t.N >= N && t.engine == Engine::dp) {
        t.P.resize(N + 1);
        t.Q.resize(N + 1);
        t.N = N;
        return t;
      }
    }
    auto t = in_module("dp_engine", [&] { return dp::compute_values(N, build_options(c)); });
    in_module("dp_engine", [&] { dp::write_cache(path, t); return 0; });
    return t;
  }
  return in_module(module_of(e), [&] { return cli::values_for(e, N, fast, build_options(c)); });
}

bool want(const Config& c, char which) { return c.fn == "both" || c.fn[0] == which; }

// ---- commands ---------------------------------------------------------------------

int cmd_compute(const Config& c, const FastEngine& fast) {
  const Engine e = parse_engine(c.engine);
  std::optional<std::uint64_t> P, Q;
  if (e == Engine::fast) {
    if (c.n > kMaxSupportedN) throw UsageError("n exceeds the supported ceiling");
    in_module("fast_engine", [&] {
      if (want(c, 'P')) P = fast.P(c.n);
      if (want(c, 'Q')) Q = fast.Q(c.n);
      return 0;
    });
  } else if (e == Engine::direct && c.n >= 2) {
    validate_range(e, c.n, c);
    in_module("dp_engine", [&] {
      const auto tables = dp::HelperTables::build(c.n, build_options(c));
      if (want(c, 'P')) P = dp::direct_P(tables, c.n);
      if (want(c, 'Q')) Q = dp::direct_Q(tables, c.n);
      return 0;
    });
  } else {
    const auto t = values(e, c.n, c, fast);
    if (want(c, 'P')) P = t.P[c.n];
    if (want(c, 'Q')) Q = t.Q[c.n];
  }

  if (c.format == "json") {
    json j{{"n", c.n}, {"engine", to_string(e)}};
    if (P) j["P"] = *P;
    if (Q) j["Q"] = *Q;
    std::cout << j.dump() << '\n';
  } else if (c.format == "csv") {
    std::cout << "n" << (P ? ",P" : "") << (Q ? ",Q" : "") << ",engine\n" << c.n;
    if (P) std::cout << ',' << *P;
    if (Q) std::cout << ',' << *Q;
    std::cout << ',' << to_string(e) << '\n';
  } else if (c.format == "text") {
    if (P && Q) {
      std::cout << "P=" << *P << " Q=" << *Q << '\n';
    } else {
      std::cout << (P ? *P : *Q) << '\n';
    }
    std::cerr << "engine: " << to_string(e) << '\n';
  } else {
    throw UsageError("compute supports --format text, csv or json");
  }
  return 0;
}

int cmd_table(const Config& c, const FastEngine& fast) {
  const Engine e = parse_engine(c.engine);
  const auto t = values(e, c.max, c, fast);
  const bool p = want(c, 'P');
  const bool q = want(c, 'Q');
  if (c.format == "bfile") {
    if (p && q) throw UsageError("bfile output needs --fn P or --fn Q");
    const auto& col = p ? t.P : t.Q;
    for (std::uint64_t n = c.offset; n <= c.max; ++n) std::cout << n << ' ' << col[n] << '\n';
  } else if (c.format == "csv") {
    std::cout << "n" << (p ? ",P" : "") << (q ? ",Q" : "") << '\n';
    for (std::uint64_t n = 0; n <= c.max; ++n) {
      std::cout << n;
      if (p) std::cout << ',' << t.P[n];
      if (q) std::cout << ',' << t.Q[n];
      std::cout << '\n';
    }
  } else if (c.format == "json") {
    json j{{"engine", to_string(e)}, {"N", c.max}};
    if (p) j["P"] = t.P;
    if (q) j["Q"] = t.Q;
    std::cout << j.dump() << '\n';
  } else {
    std::cout << "# engine: " << to_string(e) << '\n';
    for (std::uint64_t n = 0; n <= c.max; ++n) {
      std::cout << n;
      if (p) std::cout << '\t' << t.P[n];
      if (q) std::cout << '\t' << t.Q[n];
      std::cout << '\n';
    }
  }
  return 0;
}

int cmd_verify(const Config& c, const FastEngine& fast) {
  cli::VerifyOptions o;
  o.max = c.max;
  o.bounds_max = c.bounds_max;
  o.samples = c.samples;
  o.seed = c.seed;
  o.jobs = c.jobs;
  o.memory_budget = c.memory_budget;

  std::vector<cli::SuiteResult> results;
  if (!c.cross.empty()) {
    std::vector<Engine> engines;
    for (const auto& s : c.cross) {
      engines.push_back(parse_engine(s));
      validate_range(engines.back(), c.max, c);
    }
    if (engines.size() < 2) throw UsageError("--cross needs at least two engines");
    results.push_back(in_module("analysis", [&] { return cli::run_cross(engines, o, fast); }));
  } else {
    const auto& names = c.suites.empty() ? cli::kSuites : c.suites;
    for (const auto& s : names) {
      if (std::find(cli::kSuites.begin(), cli::kSuites.end(), s) == cli::kSuites.end()) {
        throw UsageError("unknown suite '" + s + "'");
      }
    }
    validate_range(Engine::dp, c.max, c);
    for (const auto& s : names) {
      results.push_back(in_module("analysis", [&] { return cli::run_suite(s, o, fast); }));
    }
  }

  bool pass = true;
  for (const auto& r : results) pass = pass && r.pass;
  if (c.format == "json" || !pass) {
    json j{{"pass", pass}, {"suites", json::array()}};
    for (const auto& r : results) j["suites"].push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    if (c.format == "json") {
      std::cout << j.dump() << '\n';
    } else {
      for (const auto& r : results) std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
      std::cout << j.dump() << '\n';
    }
  } else {
    for (const auto& r : results) std::cout << "PASS " << r.name << ": " << r.detail << '\n';
  }
  return pass ? 0 : kExitFailure;
}

int cmd_exceptions(const Config& c, const FastEngine& fast) {
  const ExceptionTable& table = fast.exceptions();
  if (!c.regenerate) {
    const auto counts = table.counts();
    if (c.format == "json") {
      json rows = json::array();
      for (const auto& r : table.records()) {
        rows.push_back({{"n", r.n}, {"P", r.P}, {"Q", r.Q}, {"p_exc", r.p_identity_fails}, {"q_exc", r.q_identity_fails}});
      }
      std::cout << json{{"source", table.source()},
                        {"rows", counts.rows},
                        {"rows_with_failure", counts.rows_with_failure},
                        {"p_failures", counts.p_failures},
                        {"q_failures", counts.q_failures},
                        {"failing_flags", counts.failing_flags()},
                        {"records", rows}}
                       .dump()
                << '\n';
    } else {
      std::cout << table.to_csv();
      std::cerr << "source: " << table.source() << "; " << counts.rows << " rows, " << counts.rows_with_failure
                << " with a failing identity, " << counts.p_failures << " P and " << counts.q_failures
                << " Q failures (" << counts.failing_flags() << " flags)\n";
    }
    return 0;
  }

  const std::uint64_t N = *c.regenerate;
  validate_range(Engine::dp, N, c);
  const auto regen = in_module("analysis", [&] { return analysis::regenerate_exceptions(N, build_options(c)); });
  const auto diff = analysis::diff_exceptions(regen, table, N);
  auto list = [](const std::vector<std::uint64_t>& v) {
    json a = json::array();
    for (auto n : v) a.push_back(n);
    return a;
  };
  if (c.format == "json") {
    json rows = json::array();
    for (const auto& r : regen) {
      rows.push_back({{"n", r.n}, {"P", r.P}, {"Q", r.Q}, {"p_exc", r.p_identity_fails}, {"q_exc", r.q_identity_fails}});
    }
    std::cout << json{{"N", N},
                      {"records", rows},
                      {"diff",
                       {{"missing", list(diff.missing)},
                        {"extra", list(diff.extra)},
                        {"flag_mismatch", list(diff.flag_mismatch)},
                        {"value_mismatch", list(diff.value_mismatch)}}},
                      {"match", diff.empty()}}
                     .dump()
              << '\n';
  } else {
    std::cout << exceptions_to_csv(regen);
    auto line = [](const char* name, const std::vector<std::uint64_t>& v) {
      std::cout << "# " << name << ':';
      for (auto n : v) std::cout << ' ' << n;
      std::cout << '\n';
    };
    std::cout << "# diff against " << table.source() << " for n <= " << N << '\n';
    line("missing", diff.missing);
    line("extra", diff.extra);
    line("flag_mismatch", diff.flag_mismatch);
    line("value_mismatch", diff.value_mismatch);
    std::cout << "# " << (diff.empty() ? "match" : "MISMATCH") << '\n';
  }
  return diff.empty() ? 0 : kExitFailure;
}

int cmd_bounds(const Config& c, const FastEngine& fast) {
  const Engine e = parse_engine(c.engine);
  if (e != Engine::fast && e != Engine::dp) throw UsageError("bounds supports --engine fast or dp");
  validate_range(e, c.max, c);
  const auto report = in_module("analysis", [&] { return analysis::check_bounds(c.max, e, fast, c.jobs); });
  if (c.format == "json" || !report.pass()) {
    std::cout << analysis::to_json(report) << '\n';
  } else {
    std::cout << "all bounds hold for 1 <= n <= " << c.max << " (engine " << to_string(e) << ")\n";
  }
  return report.pass() ? 0 : kExitFailure;
}

int cmd_triangle(const Config& c, const FastEngine& fast) {
  analysis::TriangleSeries series{};
  try {
    series = analysis::triangle_series_from_string(c.series);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (c.rows == 0) throw UsageError("--rows must be at least 1");
  const Engine e = parse_engine(c.engine);
  const auto t = values(e, analysis::triangle_extent(c.rows), c, fast);
  const auto arr = in_module("analysis", [&] { return analysis::triangle(t, series, c.rows); });
  const bool fg = series == analysis::TriangleSeries::FG;
  auto cell = [&](const analysis::TriangleEntry& x) {
    return fg ? "(" + std::to_string(x.f) + "," + std::to_string(x.g) + ")" : std::to_string(x.value);
  };
  if (c.format == "json") {
    json rows = json::array();
    for (const auto& row : arr.rows) {
      json r = json::array();
      for (const auto& x : row) r.push_back(fg ? json::array({x.f, x.g}) : json(x.value));
      rows.push_back(r);
    }
    std::cout << json{{"series", to_string(series)}, {"rows", rows}}.dump() << '\n';
  } else if (c.format == "csv") {
    std::cout << (fg ? "row,n,f,g\n" : "row,n,value\n");
    for (std::size_t r = 0; r < arr.rows.size(); ++r) {
      for (const auto& x : arr.rows[r]) {
        std::cout << r << ',' << x.n << ',';
        if (fg) std::cout << x.f << ',' << x.g << '\n';
        else std::cout << x.value << '\n';
      }
    }
  } else {
    for (const auto& row : arr.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? " " : "") << cell(row[i]);
      std::cout << '\n';
    }
  }
  return 0;
}

int cmd_plotdata(const Config& c, const FastEngine& fast) {
  if (c.fn == "both") throw UsageError("plotdata needs --fn P or --fn Q");
  const Engine e = parse_engine(c.engine);
  const auto t = values(e, c.max, c, fast);
  analysis::write_drift_csv(std::cout, analysis::emit_drift_series(t, c.fn == "P"));
  return 0;
}

int cmd_phi(const Config& c, const FastEngine& fast) {
  if (c.n > kMaxSupportedN) throw UsageError("n exceeds the supported ceiling");
  const auto orbit = g_orbit(c.n, fast.exceptions().max_n());
  if (c.format == "json") {
    std::cout << json{{"n", c.n}, {"threshold", orbit.threshold}, {"orbit", orbit.iterates}, {"phi", orbit.phi}}.dump()
              << '\n';
  } else {
    std::cout << "orbit:";
    for (auto x : orbit.iterates) std::cout << ' ' << x;
    std::cout << "\nphi: " << orbit.phi << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum perimeters of integer sets with given volume: P(n) and Q(n)"};
  app.require_subcommand(1);
  Config c;

  auto engine = [&](CLI::App* s) {
    s->add_option("--engine", c.engine, "fast, dp, brute or direct")
        ->check(CLI::IsMember({"fast", "dp", "brute", "direct"}));
  };
  auto fn = [&](CLI::App* s) { s->add_option("--fn", c.fn, "P, Q or both")->check(CLI::IsMember({"P", "Q", "both"})); };
  auto format = [&](CLI::App* s, std::vector<std::string> allowed) {
    s->add_option("--format", c.format, "output format")->check(CLI::IsMember(allowed));
  };

  app.add_option("--exceptions-file", c.exceptions_file,
                 std::string("exception table CSV; overrides $") + kExceptionsEnvVar);
  app.add_option("--jobs", c.jobs, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  app.add_option("--memory-budget", c.memory_budget, "dp table budget, e.g. 4GB")
      ->transform(CLI::AsSizeValue(false));
  app.add_option("--cache", c.cache, "binary cache file for dp tables");

  auto* compute = app.add_subcommand("compute", "P(n) and/or Q(n)");
  compute->add_option("n", c.n)->required();
  engine(compute);
  fn(compute);
  format(compute, {"text", "csv", "json"});

  auto* table = app.add_subcommand("table", "P and Q for 0 <= n <= max");
  table->add_option("--max", c.max, "largest n");
  table->add_option("--offset", c.offset, "first n written in bfile format");
  engine(table);
  fn(table);
  format(table, {"text", "csv", "json", "bfile"});

  auto* verify = app.add_subcommand("verify", "cross-engine and bound suites");
  verify->add_option("--max", c.max, "range checked against the dp engine");
  verify->add_option("--cross", c.cross, "compare only these engines, e.g. brute,dp")->delimiter(',');
  verify->add_option("--suite", c.suites, "run only these suites")->delimiter(',');
  verify->add_option("--bounds-max", c.bounds_max, "range for the bound, window and structure suites");
  verify->add_option("--samples", c.samples, "random n for the quasi-explicit check");
  verify->add_option("--seed", c.seed, "seed for the random sample");
  format(verify, {"text", "json"});

  auto* exceptions = app.add_subcommand("exceptions", "print or regenerate the exception table");
  exceptions->add_option("--regenerate", c.regenerate, "recompute flags for n <= N and diff");
  format(exceptions, {"text", "csv", "json"});

  auto* bounds = app.add_subcommand("bounds", "check the inequality suite");
  bounds->add_option("--max", c.max, "largest n");
  engine(bounds);
  format(bounds, {"text", "json"});

  auto* triangle = app.add_subcommand("triangle", "triangular arrays indexed by (f(n), g(n))");
  triangle->add_option("--series", c.series, "P_minus_f, Q_minus_f_minus_1, FG, raw_P or raw_Q");
  triangle->add_option("--rows", c.rows, "number of rows");
  engine(triangle);
  format(triangle, {"text", "csv", "json"});

  auto* plotdata = app.add_subcommand("plotdata", "CSV n,value,drift for plotting");
  plotdata->add_option("--max", c.max, "largest n");
  engine(plotdata);
  fn(plotdata);

  auto* phi = app.add_subcommand("phi", "g-orbit of n and its depth");
  phi->add_option("n", c.n)->required();
  format(phi, {"text", "json"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    std::optional<fs::path> override_path;
    if (c.exceptions_file) override_path = fs::path(*c.exceptions_file);
    const FastEngine fast(in_module("fast_engine", [&] { return ExceptionTable::resolve(override_path); }));

    if (*compute) return cmd_compute(c, fast);
    if (*table) return cmd_table(c, fast);
    if (*verify) return cmd_verify(c, fast);
    if (*exceptions) return cmd_exceptions(c, fast);
    if (*bounds) return cmd_bounds(c, fast);
    if (*triangle) return cmd_triangle(c, fast);
    if (*plotdata) return cmd_plotdata(c, fast);
    if (*phi) return cmd_phi(c, fast);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
