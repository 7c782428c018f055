#pragma once

// Finite subsets of {0, 1, 2, ...}.  A set's boundary is the elements whose
// predecessor or successor is missing; perimeter sums the boundary, volume
// sums everything.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace isoperim {

class IntSet {
 public:
  IntSet() = default;

  /// Elements must be strictly increasing.  Throws std::invalid_argument
  /// otherwise.
  explicit IntSet(std::vector<std::uint64_t> elements);

  /// Accepts any order, drops duplicates.
  static IntSet from_unsorted(std::vector<std::uint64_t> elements);

  /// {l, l+1, ..., k}; empty when l > k.
  static IntSet interval(std::uint64_t l, std::uint64_t k);

  /// Parses the literal form "{0,1,2}" (whitespace tolerated, "{}" is
  /// empty).  Negative or unordered elements are rejected.
  static IntSet parse(std::string_view text);

  std::span<const std::uint64_t> elements() const { return elements_; }
  bool empty() const { return elements_.empty(); }
  std::size_t size() const { return elements_.size(); }
  std::uint64_t max() const { return elements_.back(); }

  /// O(1) membership through the dense bitmask.
  bool contains(std::uint64_t z) const {
    const std::size_t w = z / 64;
    return w < words_.size() && ((words_[w] >> (z % 64)) & 1u);
  }

  /// Bitmask words covering [0, max]; bit z set iff z is a member.
  std::span<const std::uint64_t> words() const { return words_; }

  std::string to_string() const;

  friend bool operator==(const IntSet& a, const IntSet& b) {
    return a.elements_ == b.elements_;
  }

 private:
  void build_mask();

  std::vector<std::uint64_t> elements_;
  std::vector<std::uint64_t> words_;
};

IntSet boundary(const IntSet& a);
std::uint64_t volume(const IntSet& a);
std::uint64_t perimeter(const IntSet& a);

/// Perimeter of the cofinite complement {0,1,...} \ a.  Only the window
/// [0, max(a)+1] can contribute.
std::uint64_t complement_perimeter(const IntSet& a);

// Word-parallel evaluations over the bitmask.  Must agree with the
// element-list versions above.
std::uint64_t perimeter_bitmask(const IntSet& a);
std::uint64_t complement_perimeter_bitmask(const IntSet& a);

}  // namespace isoperim
