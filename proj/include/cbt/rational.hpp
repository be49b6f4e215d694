#ifndef CBT_RATIONAL_HPP
#define CBT_RATIONAL_HPP

// Exact arithmetic carriers. Everything identity-shaped in this library runs
// on arbitrary-precision rationals; doubles are reserved for solved
// (irrational) parameters and dense eigensolves.

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>

namespace cbt {

using Int = boost::multiprecision::cpp_int;

// expression templates stay off so arithmetic results are plain Rationals;
// deduced template parameters and Eigen both want eager value types
using Rational =
    boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                  boost::multiprecision::et_off>;

inline Int factorial(long n) {
  if (n < 0) throw std::domain_error("factorial of negative integer " + std::to_string(n));
  Int r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Int binomial_coefficient(long n, long k) {
  if (k < 0 || k > n) return 0;
  Int r = 1;
  for (long i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);  // exact: r is C(n,i+1) * (i+1)! / (i+1)! at each step
  }
  return r;
}

// N! / (x! y! (N-x-y)!)
inline Int trinomial_coefficient(long N, long x, long y) {
  if (x < 0 || y < 0 || x + y > N) return 0;
  return binomial_coefficient(N, x) * binomial_coefficient(N - x, y);
}

// integer power with negative exponents allowed (base must be nonzero then)
template <class S>
S pow_si(const S& base, long e) {
  if (e == 0) return S(1);
  bool inv = e < 0;
  unsigned long k = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  S acc(1), b = base;
  while (k) {
    if (k & 1) acc *= b;
    b *= b;
    k >>= 1;
  }
  if (inv) return S(1) / acc;
  return acc;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Parse "a/b" or "a" with optional sign; returns nullopt on malformed input.
inline std::optional<Rational> parse_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto slash = s.find('/');
  auto is_int = [](const std::string& t) {
    if (t.empty()) return false;
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  try {
    if (slash == std::string::npos) {
      if (!is_int(s)) return std::nullopt;
      return Rational(Int(s));
    }
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) return std::nullopt;
    Int d(den);
    if (d == 0) return std::nullopt;
    return Rational(Int(num), d);
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace cbt

#endif
