#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "cbt/angular.hpp"

using cbt::Float50;
using cbt::HalfInt;
using cbt::Rational;
using cbt::Surd;

namespace {

HalfInt h(long two_j) { return HalfInt::from_twice(two_j); }

// ---- independent reference for the coupling symbols ----------------------
//
// Everything below works in 50-digit floats from factorial tables, using the
// classical single-sum form of the 6-j symbol and the 6-j expansion of the
// 9-j symbol. No code is shared with the exact surd evaluator, so agreement
// is a real cross-check. All angular momenta are passed doubled.

const Float50& fact50(long n) {
  static std::vector<Float50> table = [] {
    std::vector<Float50> t(200);
    t[0] = 1;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * Float50(i);
    return t;
  }();
  return table.at(static_cast<std::size_t>(n));
}

bool tri(long a, long b, long c) {
  return (a + b + c) % 2 == 0 && a + b >= c && a + c >= b && b + c >= a;
}

Float50 delta50(long a, long b, long c) {
  return sqrt(fact50((a + b - c) / 2) * fact50((a - b + c) / 2) * fact50((b + c - a) / 2) /
              fact50((a + b + c) / 2 + 1));
}

Float50 six_j(long a, long b, long c, long d, long e, long f) {
  if (!tri(a, b, c) || !tri(a, e, f) || !tri(d, b, f) || !tri(d, e, c)) return 0;
  long t1 = (a + b + c) / 2, t2 = (a + e + f) / 2, t3 = (d + b + f) / 2, t4 = (d + e + c) / 2;
  long p1 = (a + b + d + e) / 2, p2 = (b + c + e + f) / 2, p3 = (c + a + f + d) / 2;
  Float50 s = 0;
  for (long t = std::max({t1, t2, t3, t4}); t <= std::min({p1, p2, p3}); ++t) {
    Float50 term = fact50(t + 1) / (fact50(t - t1) * fact50(t - t2) * fact50(t - t3) *
                                    fact50(t - t4) * fact50(p1 - t) * fact50(p2 - t) *
                                    fact50(p3 - t));
    s += (t % 2 ? -term : term);
  }
  return delta50(a, b, c) * delta50(a, e, f) * delta50(d, b, f) * delta50(d, e, c) * s;
}

// rows (a b c; d e f; g h i), all doubled
Float50 nine_j_ref(long a, long b, long c, long d, long e, long f, long g, long hh, long i) {
  long lo = std::max({std::abs(a - i), std::abs(b - f), std::abs(d - hh)});
  long hi = std::min({a + i, b + f, d + hh});
  if ((a + i) % 2 != (b + f) % 2 || (a + i) % 2 != (d + hh) % 2) return 0;
  Float50 s = 0;
  for (long x = lo; x <= hi; x += 2) {
    Float50 term = Float50(x + 1) * six_j(a, b, c, f, i, x) * six_j(d, e, f, b, x, hh) *
                   six_j(g, hh, i, x, a, d);
    s += (x % 2 ? -term : term);
  }
  return s;
}

Float50 ninej_value(long ta, long tb, long tx, long tc, long td, long ty, long tm, long tn,
                    long te) {
  return cbt::ninej({h(ta), h(tb), h(tx), h(tc), h(td), h(ty), h(tm), h(tn), h(te)})
      .to_float50();
}

}  // namespace

TEST_CASE("triangle factors") {
  Surd d = cbt::triangle_delta(h(1), h(1), h(2));
  CHECK(d.coefficient() == Rational(1, 6));
  CHECK(d.radicand() == 6);
  CHECK(d.squared() == Rational(1, 6));

  CHECK(cbt::triangle_delta(h(1), h(1), h(4)).is_zero());
  CHECK(cbt::triangle_delta(h(1), h(2), h(2)).is_zero());  // odd perimeter
}

TEST_CASE("recoupling W coefficients against the reference") {
  // W relates to a 6-j symbol by a sign fixed by the top row's perimeter
  std::mt19937 gen(7);
  int checked = 0;
  while (checked < 200) {
    long ta = gen() % 5, te = gen() % 5, tb = gen() % 5, ty = gen() % 5;
    long tk = gen() % 5, tx = gen() % 5;
    Surd w = cbt::racah_w(h(ta), h(te), h(tb), h(ty), h(tk), h(tx));
    Float50 ref = six_j(ta, te, tx, ty, tb, tk);
    long phase = (ta + te + tb + ty) / 2;
    if (!tri(ta, te, tx) || !tri(ty, tb, tk)) {
      CHECK(w.is_zero());
      ++checked;
      continue;
    }
    if ((ta + te + tb + ty) % 2) continue;  // W needs an integer perimeter
    Float50 got = w.to_float50();
    if (phase % 2) ref = -ref;
    CHECK(abs(got - ref) < Float50("1e-40"));
    ++checked;
  }
}

TEST_CASE("nine-j spot values") {
  // all spins 1/2 coupled pairwise to 1 and total 0
  Surd v = cbt::ninej({h(1), h(1), h(2), h(1), h(1), h(2), h(2), h(2), h(0)});
  CHECK(v.is_rational());
  CHECK(v.coefficient() == Rational(-1, 18));

  // broken column triangle
  CHECK(cbt::ninej({h(1), h(1), h(2), h(1), h(1), h(2), h(4), h(2), h(2)}).is_zero());
  // incompatible parity across rows
  CHECK(cbt::ninej({h(1), h(1), h(2), h(1), h(1), h(1), h(2), h(2), h(1)}).is_zero());
}

TEST_CASE("nine-j agrees with the 6-j expansion everywhere up to two_j = 3") {
  long checked = 0, nonzero = 0;
  for (long ta = 0; ta <= 3; ++ta)
    for (long tb = 0; tb <= 3; ++tb)
      for (long tc = 0; tc <= 3; ++tc)
        for (long td = 0; td <= 3; ++td)
          for (long te = 0; te <= 3; ++te)
            for (long tm = std::abs(ta - tc); tm <= ta + tc; tm += 2)
              for (long tn = std::abs(tb - td); tn <= tb + td; tn += 2) {
                if (!tri(tm, tn, te)) continue;
                for (long tx = std::abs(ta - tb); tx <= ta + tb; tx += 2)
                  for (long ty = std::abs(tc - td); ty <= tc + td; ty += 2) {
                    Float50 got = ninej_value(ta, tb, tx, tc, td, ty, tm, tn, te);
                    Float50 ref = nine_j_ref(ta, tb, tx, tc, td, ty, tm, tn, te);
                    CHECK(abs(got - ref) < Float50("1e-40"));
                    ++checked;
                    if (abs(ref) > Float50("1e-40")) ++nonzero;
                  }
              }
  CHECK(checked > 4000);
  CHECK(nonzero > 500);
}

TEST_CASE("nine-j agrees with the reference on random larger arguments") {
  std::mt19937 gen(99);
  int done = 0;
  while (done < 150) {
    long ta = gen() % 7, tb = gen() % 7, tc = gen() % 7, td = gen() % 7, te = gen() % 7;
    long tx = gen() % 13, ty = gen() % 13, tm = gen() % 13, tn = gen() % 13;
    Float50 got = ninej_value(ta, tb, tx, tc, td, ty, tm, tn, te);
    Float50 ref = nine_j_ref(ta, tb, tx, tc, td, ty, tm, tn, te);
    CHECK(abs(got - ref) < Float50("1e-38"));
    ++done;
  }
}

TEST_CASE("orthogonality sweep passes and its counts are stable") {
  auto rep = cbt::ninej_orthogonality_sweep(3);
  CHECK(rep.all_pass);
  CHECK(rep.first_failure.empty());
  CHECK(rep.families == 487);
  CHECK(rep.pair_checks == 1254);
}

TEST_CASE("normalized coupling functions") {
  // f is the 9-j value scaled by the square root of the four dimensions
  long ta = 2, tb = 1, tc = 1, td = 2;  // a=1, b=1/2, c=1/2, d=1
  long N = 1, x = 1, y = 0, m = 1, n = 0;
  long tX = ta + tb - 2 * x, tY = tc + td - 2 * y;
  long tM = ta + tc - 2 * m, tN = tb + td - 2 * n, tE = ta + tb + tc + td - 2 * N;
  Surd f = cbt::f_mn_normalized(x, y, m, n, h(ta), h(tb), h(tc), h(td), N);
  Surd expect = Surd::sqrt_of(Rational((tX + 1) * (tM + 1) * (tN + 1) * (tY + 1))) *
                cbt::ninej({h(ta), h(tb), h(tX), h(tc), h(td), h(tY), h(tM), h(tN), h(tE)});
  CHECK(f == expect);

  CHECK_THROWS_AS(cbt::f_mn_normalized(5, 0, 0, 0, h(2), h(1), h(1), h(2), 1),
                  std::domain_error);
}

TEST_CASE("closed-form weight matches the squared ground function") {
  long ok = 0, rejected = 0, mismatches = 0;
  bool saw_factorial_message = false;
  for (long ta = 1; ta <= 4; ++ta)
    for (long tb = 1; tb <= 4; ++tb)
      for (long tc = 1; tc <= 4; ++tc)
        for (long td = 1; td <= 4; ++td) {
          long total = ta + tb + tc + td;
          for (long N = 0; 2 * N <= total; ++N)
            for (long x = 0; 2 * x <= ta + tb; ++x)
              for (long y = 0; 2 * y <= tc + td; ++y) {
                Rational w;
                try {
                  w = cbt::weight_w_xy(x, y, h(ta), h(tb), h(tc), h(td), N);
                } catch (const std::domain_error& e) {
                  ++rejected;
                  if (std::string(e.what()).find("factorial argument") != std::string::npos)
                    saw_factorial_message = true;
                  continue;
                }
                Surd f00;
                try {
                  f00 = cbt::f_mn_normalized(x, y, 0, 0, h(ta), h(tb), h(tc), h(td), N);
                } catch (const std::domain_error&) {
                  ++rejected;
                  continue;
                }
                if (f00.squared() != w) ++mismatches;
                else ++ok;
              }
        }
  CHECK(mismatches == 0);
  CHECK(ok > 2000);
  CHECK(rejected > 0);
  CHECK(saw_factorial_message);
}

TEST_CASE("discrete orthogonality of the polynomial family") {
  cbt::RacahParams rp{Rational(1, 2), Rational(1, 3), Rational(1, 5), 4};
  auto wn = cbt::racah_weight_and_norm(rp);
  REQUIRE(wn.rho.size() == 5);
  REQUIRE(wn.h_inv.size() == 5);

  for (long m = 0; m <= rp.N; ++m)
    for (long n = m; n <= rp.N; ++n) {
      Rational s(0);
      for (long x = 0; x <= rp.N; ++x)
        s += wn.rho[x] * cbt::racah_polynomial(m, x, rp) * cbt::racah_polynomial(n, x, rp);
      if (m == n) {
        CHECK(s == wn.h_inv[m]);
        CHECK(wn.h_inv[m] != 0);
        // normalized statement, reachable because the norm is finite here
        CHECK(s / wn.h_inv[m] == Rational(1));
      } else {
        CHECK(s == Rational(0));
      }
    }
}

TEST_CASE("polynomial values at the edges") {
  cbt::RacahParams rp{Rational(1, 2), Rational(1, 3), Rational(1, 5), 4};
  for (long x = 0; x <= rp.N; ++x) CHECK(cbt::racah_polynomial(0, x, rp) == Rational(1));
  for (long n = 0; n <= rp.N; ++n) CHECK(cbt::racah_polynomial(n, 0, rp) == Rational(1));
  CHECK_THROWS_AS(cbt::racah_polynomial(5, 0, rp), std::domain_error);
  CHECK_THROWS_AS(cbt::racah_polynomial(0, -1, rp), std::domain_error);
}

TEST_CASE("integer parameter point with a diverging printed norm") {
  // at (alpha, beta, gamma, N) = (1, 1, 1, 3) the printed norm's denominator
  // carries (-gamma)_N = 0, so the finite data are the weights and the
  // reciprocal norms, which collapse to zero
  cbt::RacahParams rp{Rational(1), Rational(1), Rational(1), 3};
  auto wn = cbt::racah_weight_and_norm(rp);
  CHECK(wn.rho == std::vector<Rational>{Rational(1), Rational(0), Rational(-1), Rational(0)});
  for (long m = 0; m <= 3; ++m) CHECK(wn.h_inv[m] == Rational(0));

  // the orthogonality statement still holds in reciprocal form, 0 = 0
  for (long m = 0; m <= 3; ++m)
    for (long n = m; n <= 3; ++n) {
      Rational s(0);
      for (long x = 0; x <= 3; ++x)
        s += wn.rho[x] * cbt::racah_polynomial(m, x, rp) * cbt::racah_polynomial(n, x, rp);
      CHECK(s == (m == n ? wn.h_inv[m] : Rational(0)));
    }
}

TEST_CASE("weight construction names the factor that kills it") {
  try {
    cbt::racah_weight_and_norm({Rational(1), Rational(1), Rational(3), 3});
    FAIL("expected domain_error");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("gamma-N") != std::string::npos);
  }
  try {
    cbt::racah_weight_and_norm({Rational(1, 3), Rational(1, 5), Rational(-2), 2});
    FAIL("expected domain_error");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("(gamma+1)_x") != std::string::npos);
  }
}
