#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>

#include "isoperim/kernels.hpp"

namespace isoperim {

/// A nonnegative value or infinity.  Infinity absorbs addition and
/// subtraction and loses every min.
class ExtendedValue {
 public:
  static constexpr std::int32_t kInfRaw = kernels::kInf;

  constexpr ExtendedValue() = default;  // infinity

  static constexpr ExtendedValue infinity() { return ExtendedValue(); }

  static constexpr ExtendedValue finite(std::int64_t v) {
    if (v < 0 || v >= kInfRaw) throw std::out_of_range("ExtendedValue out of range");
    return from_raw(static_cast<std::int32_t>(v));
  }

  /// Raw kernel encoding; anything >= kInfRaw is infinity.
  static constexpr ExtendedValue from_raw(std::int32_t raw) {
    ExtendedValue e;
    e.raw_ = raw >= kInfRaw ? kInfRaw : raw;
    return e;
  }

  constexpr bool is_infinite() const { return raw_ >= kInfRaw; }
  constexpr bool is_finite() const { return !is_infinite(); }
  constexpr std::int32_t raw() const { return raw_; }

  std::int64_t value() const {
    if (is_infinite()) throw std::logic_error("value() of an infinite ExtendedValue");
    return raw_;
  }

  friend constexpr ExtendedValue operator+(ExtendedValue a, std::int64_t k) {
    if (a.is_infinite()) return a;
    return finite(a.raw_ + k);
  }
  friend constexpr ExtendedValue operator-(ExtendedValue a, std::int64_t k) { return a + (-k); }

  friend constexpr ExtendedValue min(ExtendedValue a, ExtendedValue b) {
    return a.raw_ <= b.raw_ ? a : b;
  }

  friend constexpr auto operator<=>(ExtendedValue, ExtendedValue) = default;

  friend std::ostream& operator<<(std::ostream& os, ExtendedValue v) {
    if (v.is_infinite()) return os << "inf";
    return os << v.raw_;
  }

 private:
  std::int32_t raw_ = kInfRaw;
};

}  // namespace isoperim
