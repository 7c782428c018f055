#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isoperim/dp.hpp"
#include "isoperim/fast.hpp"

namespace isoperim::cli {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t max = 2000;            // dp-checked range
  std::uint64_t bounds_max = 1000000;  // fast-engine range for bounds/window/structure
  std::uint64_t samples = 100000;      // random n <= 10^12 for quasi-explicit agreement
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::uint64_t memory_budget = std::uint64_t{4} << 30;
};

inline const std::vector<std::string> kSuites = {
    "oracle_dp", "table_rows", "exceptions", "engines", "bounds",
    "window",    "structure",  "reflection", "asymptotic"};

/// Runs one named suite.
SuiteResult run_suite(const std::string& name, const VerifyOptions& opts, const FastEngine& fast);

/// Pairwise agreement of the listed engines on [0, max].
SuiteResult run_cross(const std::vector<Engine>& engines, const VerifyOptions& opts,
                      const FastEngine& fast);

/// Values for [0, N] from any engine.  brute needs N <= 70.
ValueTable values_for(Engine engine, std::uint64_t N, const FastEngine& fast,
                      const dp::BuildOptions& options);

}  // namespace isoperim::cli
