#pragma once

#include <compare>
#include <limits>

namespace varcert {

/// A value in ℝ ∪ {+∞}. Addition follows the inf-addition convention:
/// +∞ absorbs every other summand.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT(implicit)

  static constexpr ExtendedReal infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  constexpr bool is_finite() const {
    return value_ < std::numeric_limits<double>::infinity() &&
           value_ > -std::numeric_limits<double>::infinity();
  }
  constexpr bool is_infinite() const { return !is_finite(); }
  constexpr double value() const { return value_; }

  friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (a.value_ == inf || b.value_ == inf) return infinity();
    return ExtendedReal(a.value_ + b.value_);
  }
  friend constexpr ExtendedReal operator-(ExtendedReal a, double b) {
    return a + ExtendedReal(-b);
  }
  constexpr ExtendedReal& operator+=(ExtendedReal other) {
    *this = *this + other;
    return *this;
  }

  friend constexpr auto operator<=>(ExtendedReal a, ExtendedReal b) {
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) {
    return a.value_ == b.value_;
  }

 private:
  double value_ = 0.0;
};

}  // namespace varcert
