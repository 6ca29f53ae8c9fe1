#include "walras/rational.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "walras/errors.hpp"

namespace walras {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view context) {
  std::int64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw InputError("invalid number '" + std::string(context) + "'");
  }
  return value;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw InputError("rational overflow");
  }
  return out;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) {
    throw InputError("zero denominator");
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) {
    throw InputError("empty number");
  }
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 15 || frac.front() == '-' || frac.front() == '+') {
      throw InputError("invalid number '" + std::string(text) + "'");
    }
    bool negative = !whole.empty() && whole.front() == '-';
    std::int64_t w = (whole.empty() || whole == "-") ? 0 : parse_int(whole, text);
    std::int64_t f = parse_int(frac, text);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::int64_t magnitude = checked_mul(std::abs(w), scale) + f;
    return Rational(negative ? -magnitude : magnitude, scale);
  }
  return Rational(parse_int(text, text));
}

Rational Rational::from_double(double value) {
  if (!std::isfinite(value)) {
    throw InputError("non-finite number");
  }
  std::int64_t den = 1;
  while (value != std::floor(value)) {
    if (den > (std::int64_t{1} << 40)) {
      throw InputError("number has too many binary digits to be a grid value");
    }
    value *= 2;
    den *= 2;
  }
  if (std::fabs(value) > static_cast<double>(std::numeric_limits<std::int64_t>::max() / 4)) {
    throw InputError("number out of range");
  }
  return Rational(static_cast<std::int64_t>(value), den);
}

bool Rational::is_multiple_of(const Rational& step) const {
  const Rational q = *this / step;
  return q.is_integer();
}

std::int64_t Rational::exact_multiple_of(const Rational& step, std::string_view what) const {
  const Rational q = *this / step;
  if (!q.is_integer()) {
    throw InputError(std::string(what) + " " + to_string() + " is not a multiple of tick " +
                     step.to_string());
  }
  return q.num();
}

bool Rational::is_dyadic() const { return (den_ & (den_ - 1)) == 0; }

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  std::int64_t d = den_;
  int twos = 0;
  int fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
  const int digits = std::max(twos, fives);
  std::int64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const std::int64_t scaled = checked_mul(num_, scale / den_);
  const std::int64_t mag = std::abs(scaled);
  std::string frac = std::to_string(mag % scale);
  frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  return std::string(scaled < 0 ? "-" : "") + std::to_string(mag / scale) + "." + frac;
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(checked_mul(a.num_, b.num_), checked_mul(a.den_, b.den_));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw InputError("division by zero");
  return Rational(checked_mul(a.num_, b.den_), checked_mul(a.den_, b.num_));
}

bool operator<(const Rational& a, const Rational& b) {
  return checked_mul(a.num_, b.den_) < checked_mul(b.num_, a.den_);
}

}  // namespace walras
