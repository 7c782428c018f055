#include "isoperim/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace isoperim::oracle {

namespace {

// Depth-first over distinct parts in descending order.  `parts` holds the
// current partial partition (descending), `rest` the volume still to place
// using parts <= `cap`.
void descend(std::uint64_t rest, std::uint64_t cap, std::vector<std::uint64_t>& parts,
             const std::function<void(const IntSet&)>& visit) {
  if (rest == 0) {
    std::vector<std::uint64_t> asc(parts.rbegin(), parts.rend());
    std::vector<std::uint64_t> with_zero;
    with_zero.reserve(asc.size() + 1);
    with_zero.push_back(0);
    with_zero.insert(with_zero.end(), asc.begin(), asc.end());
    visit(IntSet(std::move(asc)));
    visit(IntSet(std::move(with_zero)));
    return;
  }
  // Parts 1..cap sum to T_cap; prune when the remainder cannot fit.
  if (cap * (cap + 1) / 2 < rest) return;
  for (std::uint64_t part = std::min(cap, rest); part >= 1; --part) {
    parts.push_back(part);
    descend(rest - part, part - 1, parts, visit);
    parts.pop_back();
  }
}

Minimum minimize(std::uint64_t n, std::uint64_t ceiling,
                 std::uint64_t (*measure)(const IntSet&)) {
  Minimum best;
  bool first = true;
  enumerate_volume_sets(
      n,
      [&](const IntSet& s) {
        const auto v = measure(s);
        if (first || v < best.value) {
          best.value = v;
          best.witnesses.clear();
          first = false;
        }
        if (v == best.value) best.witnesses.push_back(s);
      },
      ceiling);
  return best;
}

}  // namespace

void enumerate_volume_sets(std::uint64_t n, const std::function<void(const IntSet&)>& visit,
                           std::uint64_t ceiling) {
  if (n > ceiling) {
    throw std::out_of_range("oracle: n = " + std::to_string(n) +
                            " exceeds the enumeration ceiling " + std::to_string(ceiling));
  }
  std::vector<std::uint64_t> parts;
  descend(n, n, parts, visit);
}

std::vector<IntSet> volume_sets(std::uint64_t n, std::uint64_t ceiling) {
  std::vector<IntSet> out;
  enumerate_volume_sets(n, [&](const IntSet& s) { out.push_back(s); }, ceiling);
  return out;
}

Minimum minimize_perimeter(std::uint64_t n, std::uint64_t ceiling) {
  return minimize(n, ceiling, &perimeter);
}

Minimum minimize_complement_perimeter(std::uint64_t n, std::uint64_t ceiling) {
  return minimize(n, ceiling, &complement_perimeter);
}

std::uint64_t brute_P(std::uint64_t n, std::uint64_t ceiling) {
  return minimize_perimeter(n, ceiling).value;
}

std::uint64_t brute_Q(std::uint64_t n, std::uint64_t ceiling) {
  return minimize_complement_perimeter(n, ceiling).value;
}

}  // namespace isoperim::oracle
