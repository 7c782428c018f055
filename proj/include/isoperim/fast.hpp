#pragma once

// P(n) and Q(n) in O(log log n) steps from the mutual recursion
//
//   P(n) = f(n) + Q(g(n)),   Q(n) = 1 + f(n) + P(g(n)),
//
// which holds for every n except the rows of an ExceptionTable, where the
// stored value is used instead.

#include <cstdint>
#include <optional>

#include "isoperim/dp.hpp"
#include "isoperim/exceptions.hpp"

namespace isoperim {

class FastEngine {
 public:
  explicit FastEngine(ExceptionTable table = ExceptionTable::embedded());

  std::uint64_t P(std::uint64_t n) const;
  std::uint64_t Q(std::uint64_t n) const;

  /// Closed form over the g-orbit.  With phi the number of g steps needed
  /// to reach the table's largest key and S the sum of f over those steps:
  ///   P(n) = P(g^phi n) + S + phi/2          (phi even)
  ///        = Q(g^phi n) + S + (phi-1)/2      (phi odd)
  ///   Q(n) = Q(g^phi n) + S + phi/2          (phi even)
  ///        = P(g^phi n) + S + (phi+1)/2      (phi odd)
  std::uint64_t quasi_explicit_P(std::uint64_t n) const;
  std::uint64_t quasi_explicit_Q(std::uint64_t n) const;

  /// 1 + P(n - f(n)) when g(n) < f(n) - 1 and the P identity holds at both
  /// n and n - f(n); empty otherwise.  Requires n >= 2.
  std::optional<std::uint64_t> shift_P(std::uint64_t n) const;
  std::optional<std::uint64_t> shift_Q(std::uint64_t n) const;

  /// 1 + f(n) + f(g(n)) + P(g(g(n))) when the P identity holds at n and the
  /// Q identity at g(n); empty otherwise.  shift/double_step for Q swap the
  /// roles.
  std::optional<std::uint64_t> double_step_P(std::uint64_t n) const;
  std::optional<std::uint64_t> double_step_Q(std::uint64_t n) const;

  /// P[0..N] and Q[0..N] in O(N): row r of the triangle (f(n) = r) is the
  /// previous values reflected and shifted, then exception rows are patched.
  ValueTable table(std::uint64_t N) const;

  const ExceptionTable& exceptions() const { return table_; }

  bool p_identity_fails(std::uint64_t n) const;
  bool q_identity_fails(std::uint64_t n) const;

 private:
  std::uint64_t eval(bool want_p, std::uint64_t n) const;
  std::uint64_t quasi_explicit(bool want_p, std::uint64_t n) const;

  ExceptionTable table_;
};

}  // namespace isoperim
