#pragma once

#include <string>

#include "ced/rational.hpp"

namespace ced {

/// Closed interval [lo, hi] with rational endpoints known to contain some
/// (usually irrational) real quantity. Arithmetic helpers round outward, so
/// strict comparisons against an Enclosure are sound.
struct Enclosure {
  Rational lo;
  Rational hi;

  static Enclosure exact(const Rational& value) { return {value, value}; }

  Rational width() const { return hi - lo; }
  Rational mid() const { return midpoint(lo, hi); }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }

  /// True when every point of the enclosure is < x (resp. > x).
  bool certainly_below(const Rational& x) const { return hi < x; }
  bool certainly_above(const Rational& x) const { return lo > x; }

  std::string to_string() const { return "[" + lo.to_string() + ", " + hi.to_string() + "]"; }
};

/// Default width for enclosures of irrational closed forms.
Rational default_enclosure_width();  // 10^-30

/// Enclosure of sqrt(x) for x >= 0 with width <= `width`. The bounds are
/// dyadic multiples of 1/den(x) obtained from the integer square root, so the
/// lower end is always <= sqrt(x) and the upper end >= sqrt(x). Perfect
/// squares yield a zero-width enclosure.
Enclosure sqrt_enclosure(const Rational& x, const Rational& width);

Enclosure operator+(const Enclosure& a, const Rational& b);
Enclosure operator-(const Enclosure& a, const Rational& b);
Enclosure operator-(const Rational& a, const Enclosure& b);
/// Scaling by a rational; a negative factor swaps the ends.
Enclosure operator*(const Rational& s, const Enclosure& a);

}  // namespace ced
