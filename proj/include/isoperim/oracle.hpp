#pragma once

// Brute-force ground truth.  Every subset of {0,...,n} with volume n is a
// partition of n into distinct positive parts, with or without the element 0.

#include <cstdint>
#include <functional>
#include <vector>

#include "isoperim/int_set.hpp"

namespace isoperim::oracle {

inline constexpr std::uint64_t kDefaultCeiling = 70;

/// Calls `visit` once for every subset of {0,1,...} with volume n.
/// Throws std::out_of_range when n > ceiling.
void enumerate_volume_sets(std::uint64_t n, const std::function<void(const IntSet&)>& visit,
                           std::uint64_t ceiling = kDefaultCeiling);

/// Materialized enumeration, same order as the visitor form.
std::vector<IntSet> volume_sets(std::uint64_t n, std::uint64_t ceiling = kDefaultCeiling);

struct Minimum {
  std::uint64_t value = 0;
  std::vector<IntSet> witnesses;  // every set attaining the minimum
};

Minimum minimize_perimeter(std::uint64_t n, std::uint64_t ceiling = kDefaultCeiling);
Minimum minimize_complement_perimeter(std::uint64_t n,
                                      std::uint64_t ceiling = kDefaultCeiling);

std::uint64_t brute_P(std::uint64_t n, std::uint64_t ceiling = kDefaultCeiling);
std::uint64_t brute_Q(std::uint64_t n, std::uint64_t ceiling = kDefaultCeiling);

}  // namespace isoperim::oracle
