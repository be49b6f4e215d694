#include "cbt/surd.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace cbt {

namespace {

// n = s^2 * f with f square-free; returns (s, f). The radicands produced by
// triangle coefficients are ratios of factorials, so they are smooth: trial
// division up to 2^16 removes every prime factor that actually occurs. A
// remainder bigger than that bound is either a prime square or square-free.
std::pair<Int, Int> extract_square(Int n) {
  Int s = 1, f = 1;
  auto strip = [&](long p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) s *= p;
    if (e & 1) f *= p;
  };
  strip(2);
  for (long p = 3; p <= 65536 && Int(p) * p <= n; p += 2) strip(p);
  if (n > 1) {
    Int r = sqrt(n);
    if (r * r == n)
      s *= r;
    else
      f *= n;
  }
  return {s, f};
}

}  // namespace

Surd Surd::make(const Rational& coeff, const Rational& radicand) {
  if (radicand < 0) throw std::domain_error("negative radicand");
  if (coeff == 0 || radicand == 0) return Surd();
  // c * sqrt(p/q) = (c/q) * sqrt(p*q)
  Int p = numerator(radicand), q = denominator(radicand);
  auto [s, f] = extract_square(p * q);
  Surd out;
  out.coeff_ = coeff * Rational(s, q);
  out.rad_ = f;
  return out;
}

double Surd::to_double() const {
  return cbt::to_double(coeff_) * std::sqrt(rad_.convert_to<double>());
}

Float50 Surd::to_float50() const {
  return Float50(coeff_) * sqrt(Float50(rad_));
}

Surd Surd::operator-() const {
  Surd out = *this;
  out.coeff_ = -out.coeff_;
  return out;
}

Surd& Surd::operator+=(const Surd& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (rad_ != o.rad_)
    throw std::domain_error("surd addition across different radicands (" + rad_.str() + " vs " +
                            o.rad_.str() + ")");
  coeff_ += o.coeff_;
  if (coeff_ == 0) rad_ = 0;
  return *this;
}

Surd& Surd::operator*=(const Surd& o) {
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = Surd();
  // both radicands square-free: with g = gcd, r1*r2 = g^2 * (r1/g)(r2/g)
  // and the cofactors are coprime square-free, so no factoring is needed
  Int g = gcd(rad_, o.rad_);
  coeff_ *= o.coeff_ * Rational(g);
  rad_ = (rad_ / g) * (o.rad_ / g);
  return *this;
}

Surd& Surd::operator*=(const Rational& q) {
  if (q == 0) return *this = Surd();
  coeff_ *= q;
  return *this;
}

Surd& Surd::operator/=(const Rational& q) {
  if (q == 0) throw std::domain_error("surd division by zero");
  coeff_ /= q;
  return *this;
}

}  // namespace cbt
