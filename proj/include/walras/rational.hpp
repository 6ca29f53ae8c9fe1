#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace walras {

/// Exact non-negative-denominator rational used for the price tick and for
/// converting user-facing decimals onto the tick grid.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Accepts "3", "1/2", "0.25", "2.5". Throws InputError on anything else.
  static Rational parse(std::string_view text);
  /// Exact conversion of a finite double; doubles are dyadic so this never rounds.
  static Rational from_double(double value);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool positive() const { return num_ > 0; }

  /// Number of times `step` fits into *this; throws InputError if not exact.
  std::int64_t exact_multiple_of(const Rational& step, std::string_view what) const;
  bool is_multiple_of(const Rational& step) const;

  /// "3", "2.5", or "1/3" when no finite decimal exists.
  std::string to_string() const;
  /// True when the value has a terminating binary expansion (safe as double).
  bool is_dyadic() const;
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace walras
