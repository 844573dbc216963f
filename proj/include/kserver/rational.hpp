#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace kserver {

using Rational = mpq_class;

/// Parses "p/q", "-p/q" or an integer. The result is canonical.
/// Throws Error(ParseError) on anything else, including a zero denominator.
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" when the denominator is one.
std::string to_string(const Rational& value);

/// Smallest integer not below `value`.
mpz_class ceil(const Rational& value);

struct RationalHash {
  std::size_t operator()(const Rational& value) const noexcept;
};

/// Ratio in [0, +inf]. Used where an algorithm pays on a sequence with zero
/// optimal cost.
class ExtendedRatio {
 public:
  ExtendedRatio() = default;
  explicit ExtendedRatio(Rational value) : value_(std::move(value)) {}
  static ExtendedRatio infinity() {
    ExtendedRatio r;
    r.infinite_ = true;
    return r;
  }

  /// cost / opt with 0/0 = 1 and x/0 = +inf for x > 0.
  static ExtendedRatio of(const Rational& cost, const Rational& opt);

  bool is_infinite() const noexcept { return infinite_; }
  const Rational& value() const;

  friend bool operator==(const ExtendedRatio& a, const ExtendedRatio& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend bool operator<(const ExtendedRatio& a, const ExtendedRatio& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator>(const ExtendedRatio& a, const ExtendedRatio& b) { return b < a; }
  friend bool operator<=(const ExtendedRatio& a, const ExtendedRatio& b) { return !(b < a); }
  friend bool operator>=(const ExtendedRatio& a, const ExtendedRatio& b) { return !(a < b); }

 private:
  Rational value_{1};
  bool infinite_ = false;
};

std::string to_string(const ExtendedRatio& value);

}  // namespace kserver
