#ifndef CBT_SURD_HPP
#define CBT_SURD_HPP

// Exact values of the form  coefficient * sqrt(radicand).
//
// Canonical form: the radicand is a square-free nonnegative integer (any
// rational radicand has its denominator folded into the coefficient, and all
// square factors are pulled out), radicand 1 means the value is rational, and
// the exact zero is stored as (0, 0). This makes equality a memberwise
// comparison. Addition is only defined between surds over the same radicand;
// mixing radicands throws, which is what the closure assertions in the
// coupling-coefficient sums rely on.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cbt/rational.hpp"

namespace cbt {

using Float50 = boost::multiprecision::cpp_bin_float_50;

class Surd {
 public:
  Surd() : coeff_(0), rad_(0) {}
  explicit Surd(const Rational& value) : coeff_(value), rad_(value == 0 ? 0 : 1) {}

  // coeff * sqrt(radicand), radicand >= 0 rational; brings into canonical form
  static Surd make(const Rational& coeff, const Rational& radicand);
  // sqrt(x) for x >= 0
  static Surd sqrt_of(const Rational& x) { return make(Rational(1), x); }

  const Rational& coefficient() const { return coeff_; }
  const Int& radicand() const { return rad_; }

  bool is_zero() const { return coeff_ == 0; }
  bool is_rational() const { return coeff_ == 0 || rad_ == 1; }

  Rational squared() const { return coeff_ * coeff_ * Rational(rad_); }
  double to_double() const;
  Float50 to_float50() const;

  Surd operator-() const;
  Surd& operator+=(const Surd& o);
  Surd& operator-=(const Surd& o) { return *this += -o; }
  Surd& operator*=(const Surd& o);
  Surd& operator*=(const Rational& q);
  Surd& operator/=(const Rational& q);

  friend Surd operator+(Surd a, const Surd& b) { return a += b; }
  friend Surd operator-(Surd a, const Surd& b) { return a -= b; }
  friend Surd operator*(Surd a, const Surd& b) { return a *= b; }
  friend Surd operator*(Surd a, const Rational& q) { return a *= q; }
  friend Surd operator*(const Rational& q, Surd a) { return a *= q; }
  friend Surd operator/(Surd a, const Rational& q) { return a /= q; }
  friend bool operator==(const Surd& a, const Surd& b) {
    return a.coeff_ == b.coeff_ && a.rad_ == b.rad_;
  }
  friend bool operator!=(const Surd& a, const Surd& b) { return !(a == b); }

 private:
  Rational coeff_;
  Int rad_;
};

}  // namespace cbt

#endif
