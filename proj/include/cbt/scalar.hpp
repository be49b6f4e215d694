#ifndef CBT_SCALAR_HPP
#define CBT_SCALAR_HPP

// Backend-generic helpers shared by the series and chain code. Two scalar
// backends are supported: cbt::Rational (exact, the default for identity
// tests) and double (for parameters that are only available as floats, e.g.
// solved fixed points). The float backend treats anything within 1e-9 of a
// nonpositive integer as that integer, and snaps it before use, because such
// values arrive from root solving with rounding on them.

#include <cmath>
#include <optional>

#include "cbt/rational.hpp"

namespace cbt {

inline constexpr double kIntegerSnapTol = 1e-9;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static std::optional<long> as_integer(const Rational& x) {
    if (denominator(x) != 1) return std::nullopt;
    return numerator(x).convert_to<long>();
  }
  static Rational snap(const Rational& x) { return x; }
  static Rational from_rational(const Rational& q) { return q; }
  static bool is_zero(const Rational& x) { return x == 0; }
};

template <>
struct scalar_traits<double> {
  static std::optional<long> as_integer(double x) {
    double r = std::nearbyint(x);
    if (std::abs(x - r) <= kIntegerSnapTol && std::abs(r) < 9e15) return static_cast<long>(r);
    return std::nullopt;
  }
  static double snap(double x) {
    auto k = as_integer(x);
    return k ? static_cast<double>(*k) : x;
  }
  static double from_rational(const Rational& q) { return to_double(q); }
  static bool is_zero(double x) { return x == 0.0; }
};

// Nonpositive integer detection is what decides series termination.
template <class S>
std::optional<long> as_nonpositive_integer(const S& x) {
  auto k = scalar_traits<S>::as_integer(x);
  if (k && *k <= 0) return k;
  return std::nullopt;
}

}  // namespace cbt

#endif
