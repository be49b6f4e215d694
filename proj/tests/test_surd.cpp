#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cbt/surd.hpp"

using cbt::Int;
using cbt::Rational;
using cbt::Surd;

TEST_CASE("canonical form pulls out square factors") {
  Surd s = Surd::make(Rational(1), Rational(8));
  CHECK(s.coefficient() == Rational(2));
  CHECK(s.radicand() == 2);

  CHECK(Surd::make(Rational(1), Rational(4)) == Surd(Rational(2)));
  CHECK(Surd::sqrt_of(Rational(49, 4)) == Surd(Rational(7, 2)));

  Surd t = Surd::make(Rational(3, 2), Rational(50));
  CHECK(t.coefficient() == Rational(15, 2));
  CHECK(t.radicand() == 2);
}

TEST_CASE("rational radicands fold their denominator into the coefficient") {
  // sqrt(9/2) = (3/2) sqrt(2)
  Surd s = Surd::sqrt_of(Rational(9, 2));
  CHECK(s.coefficient() == Rational(3, 2));
  CHECK(s.radicand() == 2);

  // sqrt(5/12) = (1/6) sqrt(15)
  Surd u = Surd::sqrt_of(Rational(5, 12));
  CHECK(u.coefficient() == Rational(1, 6));
  CHECK(u.radicand() == 15);
  CHECK(u.squared() == Rational(5, 12));
}

TEST_CASE("zero and negatives") {
  Surd z;
  CHECK(z.is_zero());
  CHECK(z.is_rational());
  CHECK(z.radicand() == 0);
  CHECK(Surd(Rational(0)) == z);
  CHECK(Surd::make(Rational(0), Rational(7)) == z);
  CHECK(Surd::sqrt_of(Rational(0)) == z);
  CHECK_THROWS_AS(Surd::sqrt_of(Rational(-2)), std::domain_error);

  Surd s = Surd::make(Rational(-2, 3), Rational(5));
  CHECK((-s).coefficient() == Rational(2, 3));
  CHECK(s.squared() == Rational(20, 9));
  CHECK(s.to_double() == doctest::Approx(-2.0 / 3.0 * std::sqrt(5.0)));
}

TEST_CASE("multiplication reduces radicands through their gcd") {
  Surd a = Surd::sqrt_of(Rational(6));
  Surd b = Surd::sqrt_of(Rational(10));
  Surd p = a * b;  // sqrt(60) = 2 sqrt(15)
  CHECK(p.coefficient() == Rational(2));
  CHECK(p.radicand() == 15);

  CHECK(a * a == Surd(Rational(6)));
  CHECK(a * Surd() == Surd());
  CHECK(a * Rational(0) == Surd());
  CHECK((a * Rational(3, 2)).coefficient() == Rational(3, 2));

  Surd q = Surd::sqrt_of(Rational(15)) * Surd::sqrt_of(Rational(35));
  // sqrt(525) = 5 sqrt(21)
  CHECK(q.coefficient() == Rational(5));
  CHECK(q.radicand() == 21);
}

TEST_CASE("addition is closed over one radicand and rejects the rest") {
  Surd a = Surd::sqrt_of(Rational(2));
  Surd b = Surd::make(Rational(2), Rational(2));
  CHECK((a + b).coefficient() == Rational(3));
  CHECK(a + (-a) == Surd());
  CHECK((a - b).coefficient() == Rational(-1));

  // adding the exact zero never trips the closure assertion
  CHECK(Surd() + a == a);
  CHECK(a + Surd() == a);

  CHECK_THROWS_AS(Surd::sqrt_of(Rational(2)) + Surd::sqrt_of(Rational(3)), std::domain_error);
  // rational + irrational mixes radicands 1 and 2
  CHECK_THROWS_AS(Surd(Rational(1)) + Surd::sqrt_of(Rational(2)), std::domain_error);
}

TEST_CASE("division by rationals") {
  Surd a = Surd::make(Rational(3), Rational(7));
  CHECK((a / Rational(3, 2)).coefficient() == Rational(2));
  CHECK_THROWS_AS(a / Rational(0), std::domain_error);
}

TEST_CASE("square extraction copes with prime factors beyond the trial bound") {
  // 65537 is prime and larger than the 2^16 trial-division cutoff
  Int big = 65537;
  Surd p2 = Surd::sqrt_of(Rational(big * big));
  CHECK(p2.is_rational());
  CHECK(p2.coefficient() == Rational(big));

  Surd p = Surd::sqrt_of(Rational(big));
  CHECK(p.radicand() == big);
  CHECK(p.coefficient() == Rational(1));

  // 2 * 65537^2: the small factor is stripped, the large square detected
  Surd mixed = Surd::sqrt_of(Rational(Int(2) * big * big));
  CHECK(mixed.coefficient() == Rational(big));
  CHECK(mixed.radicand() == 2);
}

TEST_CASE("float renderings agree with the exact value") {
  Surd s = Surd::make(Rational(-7, 3), Rational(30));
  CHECK(s.to_double() == doctest::Approx(-7.0 / 3.0 * std::sqrt(30.0)).epsilon(1e-15));

  cbt::Float50 f = s.to_float50();
  cbt::Float50 ref = cbt::Float50(-7) / 3 * sqrt(cbt::Float50(30));
  cbt::Float50 rel = abs(f - ref) / abs(ref);
  CHECK(rel < cbt::Float50("1e-45"));
}
