#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <random>
#include <vector>

#include "cbt/series.hpp"

using cbt::Rational;

namespace {

Rational q(long n, long d) { return Rational(n, d); }

// random small rationals with odd denominators, never integers
Rational draw_frac(std::mt19937& gen) {
  std::uniform_int_distribution<long> num(-6, 6);
  std::uniform_int_distribution<int> den_pick(0, 3);
  static const long dens[] = {3, 5, 7, 11};
  long d = dens[den_pick(gen)];
  long n = num(gen);
  if (n % d == 0) n += 1;
  return Rational(n, d);
}

}  // namespace

TEST_CASE("pochhammer basics") {
  CHECK(cbt::pochhammer(Rational(3), 4) == Rational(3 * 4 * 5 * 6));
  CHECK(cbt::pochhammer(Rational(-2), 3) == Rational(0));
  CHECK(cbt::pochhammer(q(1, 2), 2) == q(3, 4));
  CHECK(cbt::pochhammer(Rational(5), 0) == Rational(1));
  CHECK_THROWS_AS(cbt::pochhammer(Rational(1), -1), std::domain_error);
}

TEST_CASE("terminating series values match independent summation") {
  // frozen by summing the defining series in exact arithmetic elsewhere
  auto a = cbt::hyp_terminating<Rational>({q(-3, 1), q(1, 2)}, {q(1, 3)}, q(2, 5));
  CHECK(a.value == q(-37, 350));
  CHECK(a.term_count == 4);

  auto b = cbt::hyp_terminating<Rational>({q(-4, 1), q(2, 1), q(5, 2)}, {q(1, 2), q(3, 1)},
                                          q(-3, 7));
  CHECK(b.value == q(193987, 12005));
}

TEST_CASE("zero argument and interior numerator zeros") {
  auto z = cbt::hyp_terminating<Rational>({q(-3, 1), q(1, 2)}, {q(1, 3)}, Rational(0));
  CHECK(z.value == Rational(1));
  CHECK(z.term_count == 1);

  // numerator -1 cuts the sum before -4 does
  auto c = cbt::hyp_terminating<Rational>({q(-4, 1), q(-1, 1)}, {q(1, 2)}, q(1, 3));
  CHECK(c.value == Rational(1) + q(-4, 1) * q(-1, 1) * q(1, 3) / q(1, 2));
  CHECK(c.term_count == 2);
}

TEST_CASE("series error contracts") {
  CHECK_THROWS_AS(cbt::hyp_terminating<Rational>({q(1, 2), q(2, 1)}, {q(3, 1)}, q(1, 2)),
                  cbt::nonterminating_series);

  // denominator -3 dies at term 4, before the numerator -5 terminates at term 6
  try {
    cbt::hyp_terminating<Rational>({q(-5, 1), q(1, 1)}, {q(2, 1), q(-3, 1)}, q(1, 2));
    FAIL("expected series_domain_error");
  } catch (const cbt::series_domain_error& e) {
    CHECK(e.param_index == 2);
  }

  // a denominator equal to a numerator's stopping point is still fine:
  // -3 in the denominator first vanishes at term 4, which is never reached,
  // and the (-3)_k factors cancel exactly
  auto ok = cbt::hyp_terminating<Rational>({q(-3, 1), q(1, 2)}, {q(-3, 1)}, q(2, 5));
  Rational truncated(0);
  for (long k = 0; k <= 3; ++k)
    truncated += cbt::pochhammer(q(1, 2), k) * cbt::pow_si(q(2, 5), k) / Rational(cbt::factorial(k));
  CHECK(ok.value == truncated);
}

TEST_CASE("float backend snaps near-integer parameters") {
  auto exact = cbt::hyp_terminating<Rational>({q(-3, 1), q(1, 2)}, {q(1, 3)}, q(2, 5));
  auto fl = cbt::hyp_terminating<double>({-3.0 + 1e-12, 0.5}, {1.0 / 3.0}, 0.4);
  CHECK(fl.value == doctest::Approx(cbt::to_double(exact.value)).epsilon(1e-12));
  CHECK(fl.term_count == 4);
}

TEST_CASE("whipple transform reproduces the frozen spot values") {
  std::array<Rational, 4> numer{q(-3, 1), q(1, 2), q(1, 3), q(1, 4)};
  std::array<Rational, 3> denom{q(2, 1), q(3, 4), q(-11, 3)};

  auto lhs = cbt::hyp_terminating<Rational>({numer.begin(), numer.end()},
                                            {denom.begin(), denom.end()}, Rational(1));
  CHECK(lhs.value == q(111425, 108416));

  auto tr = cbt::whipple_transform(numer, denom);
  CHECK(tr.prefactor == q(18525, 54208));
  auto rhs = cbt::hyp_terminating<Rational>({tr.numer.begin(), tr.numer.end()},
                                            {tr.denom.begin(), tr.denom.end()}, Rational(1));
  CHECK(rhs.value == q(4457, 1482));
  CHECK(lhs.value == tr.prefactor * rhs.value);
}

TEST_CASE("whipple transform identity on random balanced tuples") {
  std::mt19937 gen(20240117);
  int done = 0;
  while (done < 60) {
    long n = 1 + static_cast<long>(gen() % 5);
    Rational a = draw_frac(gen), b = draw_frac(gen), c = draw_frac(gen);
    Rational d = draw_frac(gen), e = draw_frac(gen);
    Rational f = a + b + c + 1 - d - e - Rational(n);
    // keep every denominator parameter, original and transformed, off the
    // integers: the transform sends (e, f) to (1+a-e-n, 1+a-f-n)
    if (denominator(f) == 1 || denominator(a - e) == 1 || denominator(a - f) == 1) continue;

    std::array<Rational, 4> numer{Rational(-n), a, b, c};
    std::array<Rational, 3> denom{d, e, f};
    auto tr = cbt::whipple_transform(numer, denom);

    auto lhs = cbt::hyp_terminating<Rational>({numer.begin(), numer.end()},
                                              {denom.begin(), denom.end()}, Rational(1));
    auto rhs = cbt::hyp_terminating<Rational>({tr.numer.begin(), tr.numer.end()},
                                              {tr.denom.begin(), tr.denom.end()}, Rational(1));
    CHECK(lhs.value == tr.prefactor * rhs.value);

    // applying the transform twice restores the tuple and cancels the prefactor
    auto back = cbt::whipple_transform(tr.numer, tr.denom);
    CHECK(back.numer == numer);
    CHECK(back.denom == denom);
    CHECK(tr.prefactor * back.prefactor == Rational(1));
    ++done;
  }
}

TEST_CASE("whipple transform rejections") {
  std::array<Rational, 4> unbalanced{q(-3, 1), q(1, 2), q(1, 3), q(1, 4)};
  std::array<Rational, 3> denom{q(2, 1), q(3, 4), q(1, 3)};
  try {
    cbt::whipple_transform(unbalanced, denom);
    FAIL("expected unbalanced_series");
  } catch (const cbt::unbalanced_series& e) {
    Rational resid = q(1, 2) + q(1, 3) + q(1, 4) + 1 - 2 - q(3, 4) - q(1, 3) - 3;
    CHECK(e.residual == doctest::Approx(cbt::to_double(resid)));
  }

  std::array<Rational, 4> no_term{q(1, 5), q(1, 2), q(1, 3), q(1, 4)};
  CHECK_THROWS_AS(cbt::whipple_transform(no_term, denom), cbt::nonterminating_series);

  // (e)_n vanishes: e = -1 with n = 3
  std::array<Rational, 4> numer{q(-3, 1), q(1, 2), q(1, 3), q(1, 4)};
  Rational e(-1);
  Rational f = q(1, 2) + q(1, 3) + q(1, 4) + 1 - 2 - e - 3;
  try {
    cbt::whipple_transform(numer, {Rational(2), e, f});
    FAIL("expected series_domain_error");
  } catch (const cbt::series_domain_error& err) {
    CHECK(err.param_index == 2);
  }
}

TEST_CASE("appell double sums match independent summation") {
  auto f1 = cbt::appell_f1<Rational>(q(-2, 1), q(1, 2), q(1, 3), q(3, 1), q(2, 7), q(5, 7));
  CHECK(f1.value == q(4105, 5292));

  auto f3 = cbt::appell_f3<Rational>(q(-2, 1), q(1, 2), q(-1, 1), q(-3, 1), q(-5, 1), q(1, 3),
                                     q(2, 5));
  CHECK(f3.value == q(491, 500));

  auto it = cbt::f1_iterated<Rational>(q(-2, 1), q(-1, 1), q(-3, 1), q(-2, 1), q(-7, 1), q(1, 2),
                                       q(1, 3), q(1, 5), q(1, 7));
  CHECK(it.value == q(26879, 66150));
}

TEST_CASE("appell f1 terminates through either route") {
  // b and c nonpositive integers, a free
  auto bc = cbt::appell_f1<Rational>(q(1, 2), q(-2, 1), q(-1, 1), q(5, 1), q(1, 3), q(1, 7));
  Rational direct(0);
  for (long i = 0; i <= 2; ++i)
    for (long j = 0; j <= 1; ++j)
      direct += cbt::pochhammer(q(1, 2), i + j) * cbt::pochhammer(q(-2, 1), i) *
                cbt::pochhammer(q(-1, 1), j) * cbt::pow_si(q(1, 3), i) * cbt::pow_si(q(1, 7), j) /
                (Rational(cbt::factorial(i) * cbt::factorial(j)) * cbt::pochhammer(q(5, 1), i + j));
  CHECK(bc.value == direct);

  CHECK_THROWS_AS(cbt::appell_f1<Rational>(q(1, 2), q(-2, 1), q(1, 3), q(5, 1), q(1, 3), q(1, 7)),
                  cbt::nonterminating_series);
  CHECK_THROWS_AS(cbt::appell_f1<Rational>(q(-4, 1), q(1, 2), q(1, 3), q(-2, 1), q(1, 3), q(1, 7)),
                  cbt::series_domain_error);
}

TEST_CASE("appell f3 and the quadruple sum reject nonterminating pairs") {
  CHECK_THROWS_AS(cbt::appell_f3<Rational>(q(-2, 1), q(1, 2), q(-1, 1), q(1, 3), q(-5, 1), q(1, 3),
                                           q(2, 5)),
                  cbt::nonterminating_series);
  CHECK_THROWS_AS(cbt::f1_iterated<Rational>(q(-2, 1), q(1, 2), q(-3, 1), q(-2, 1), q(-7, 1),
                                             q(1, 2), q(1, 3), q(1, 5), q(1, 7)),
                  cbt::nonterminating_series);
}

TEST_CASE("quadruple sum with vanished cross arguments reduces to a double sum") {
  // with mu = rho = 0 only j = l = 0 survives
  auto it = cbt::f1_iterated<Rational>(q(-2, 1), q(-2, 1), q(-3, 1), q(-1, 1), q(-6, 1), q(1, 2),
                                       Rational(0), q(1, 5), Rational(0));
  Rational direct(0);
  for (long i = 0; i <= 2; ++i)
    for (long k = 0; k <= 2; ++k)
      direct += cbt::pochhammer(q(-2, 1), i) * cbt::pochhammer(q(-2, 1), k) *
                cbt::pochhammer(q(-3, 1), i + k) * cbt::pow_si(q(1, 2), i) *
                cbt::pow_si(q(1, 5), k) /
                (Rational(cbt::factorial(i) * cbt::factorial(k)) *
                 cbt::pochhammer(q(-6, 1), i + k));
  CHECK(it.value == direct);
}
