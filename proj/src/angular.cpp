#include "cbt/angular.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cbt/series.hpp"

namespace cbt {

namespace {

// all angular momentum arithmetic below runs on doubled values (two_j),
// where triangle and parity checks are plain integer comparisons

bool triangle_ok(long ta, long tb, long tc) {
  if ((ta + tb + tc) % 2 != 0) return false;  // perimeter must be an integer
  return ta + tb >= tc && ta + tc >= tb && tb + tc >= ta;
}

// squared triangle factor (a+b-c)!(a-b+c)!(b+c-a)! / (a+b+c+1)!
Rational tri_delta2(long ta, long tb, long tc) {
  return Rational(
      factorial((ta + tb - tc) / 2) * factorial((ta - tb + tc) / 2) * factorial((tb + tc - ta) / 2),
      factorial((ta + tb + tc) / 2 + 1));
}

Surd racah_w_impl(long ta, long te, long tb, long ty, long tk, long tx) {
  if (!triangle_ok(ta, tb, tx) || !triangle_ok(tb, ty, tk) ||
      !triangle_ok(tx, ty, te) || !triangle_ok(ta, te, tk))
    return Surd();

  Rational d2 = tri_delta2(ta, tb, tx) * tri_delta2(tb, ty, tk) *
                tri_delta2(tx, ty, te) * tri_delta2(ta, te, tk);

  // factorial of a doubled value; the triangles above guarantee the argument
  // is an even nonnegative integer
  auto hf = [](long tv) { return factorial(tv / 2); };
  Int num = factorial(ta) * hf(ta + tb + te - ty) * hf(ta + tb + te + ty + 2);
  Int den = hf(ta + tb - tx) * hf(ta - tb + tx) * hf(tb + ty - tk) * hf(tb - ty + tk) *
            hf(tx - ty + te) * hf(ty - tx + te) * hf(ta + te - tk) * hf(ta - te + tk);

  // terminating 4F3 at unit argument; all seven parameters are integers here
  std::vector<Rational> nu = {Rational((tk - ta - te) / 2), Rational((-tk - ta - te - 2) / 2),
                              Rational((tx - ta - tb) / 2), Rational((-tx - ta - tb - 2) / 2)};
  std::vector<Rational> de = {Rational(-ta), Rational((ty - ta - tb - te) / 2),
                              Rational((-ty - ta - tb - te - 2) / 2)};
  Rational f = hyp_terminating<Rational>(nu, de, Rational(1)).value;

  return Surd::sqrt_of(d2) * (Rational(num, den) * f);
}

// W values recur heavily in the coupling-symbol sums, so memoize them.
// Doubled arguments below 1024 are packed into one key; anything larger
// (never hit by the orthogonality sweeps) just bypasses the cache.
Surd racah_w_t(long ta, long te, long tb, long ty, long tk, long tx) {
  if ((ta | te | tb | ty | tk | tx) >= 1024)
    return racah_w_impl(ta, te, tb, ty, tk, tx);
  uint64_t key = 0;
  for (long v : {ta, te, tb, ty, tk, tx}) key = (key << 10) | static_cast<uint64_t>(v);
  thread_local std::unordered_map<uint64_t, Surd> cache;
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  Surd val = racah_w_impl(ta, te, tb, ty, tk, tx);
  cache.emplace(key, val);
  return val;
}

Surd ninej_t(long ta, long tb, long tx, long tc, long td, long ty, long tm, long tn, long te) {
  if (!triangle_ok(ta, tb, tx) || !triangle_ok(tc, td, ty) || !triangle_ok(tm, tn, te) ||
      !triangle_ok(ta, tc, tm) || !triangle_ok(tb, td, tn) || !triangle_ok(tx, ty, te))
    return Surd();
  if ((ta + te) % 2 != (tb + ty) % 2 || (ta + te) % 2 != (tc + tn) % 2)
    return Surd();  // the three coupling ranges for k have incompatible parity

  long lo = std::max({std::abs(ta - te), std::abs(tb - ty), std::abs(tc - tn)});
  long hi = std::min({ta + te, tb + ty, tc + tn});
  Surd s;
  for (long tk = lo; tk <= hi; tk += 2) {
    Surd term = racah_w_t(ta, te, tc, tn, tk, tm);
    if (term.is_zero()) continue;
    term *= racah_w_t(ta, te, tb, ty, tk, tx);
    if (term.is_zero()) continue;
    term *= racah_w_t(tb, ty, tn, tc, tk, td);
    if (term.is_zero()) continue;
    s += term * Rational(tk + 1);  // (2k+1) in doubled units
  }
  return s;
}

}  // namespace

Surd triangle_delta(HalfInt a, HalfInt b, HalfInt c) {
  long ta = a.twice(), tb = b.twice(), tc = c.twice();
  if (!triangle_ok(ta, tb, tc)) return Surd();
  return Surd::sqrt_of(tri_delta2(ta, tb, tc));
}

Surd racah_w(HalfInt a, HalfInt e, HalfInt b, HalfInt y, HalfInt k, HalfInt x) {
  return racah_w_t(a.twice(), e.twice(), b.twice(), y.twice(), k.twice(), x.twice());
}

Surd ninej(const NineJArgs& g) {
  return ninej_t(g.a.twice(), g.b.twice(), g.x.twice(), g.c.twice(), g.d.twice(),
                 g.y.twice(), g.m.twice(), g.n.twice(), g.e.twice());
}

NineJOrthogonalityReport ninej_orthogonality_sweep(long max_two_j) {
  if (max_two_j < 0) throw std::domain_error("max_two_j must be nonnegative");
  NineJOrthogonalityReport rep;

  for (long ta = 0; ta <= max_two_j; ++ta)
    for (long tb = 0; tb <= max_two_j; ++tb)
      for (long tc = 0; tc <= max_two_j; ++tc)
        for (long td = 0; td <= max_two_j; ++td)
          for (long te = 0; te <= max_two_j; ++te) {
            // bottom rows (m, n) compatible with the column couplings and with e
            std::vector<std::pair<long, long>> rows;
            for (long tm = std::abs(ta - tc); tm <= std::min(ta + tc, max_two_j); tm += 2)
              for (long tn = std::abs(tb - td); tn <= std::min(tb + td, max_two_j); tn += 2)
                if (triangle_ok(tm, tn, te)) rows.emplace_back(tm, tn);
            if (rows.empty()) continue;
            ++rep.families;

            // tabulate the symbols once per family over the full (x, y) ranges
            std::vector<std::pair<long, long>> grid;
            for (long tx = std::abs(ta - tb); tx <= ta + tb; tx += 2)
              for (long ty = std::abs(tc - td); ty <= tc + td; ty += 2)
                if (triangle_ok(tx, ty, te)) grid.emplace_back(tx, ty);
            std::vector<std::vector<Surd>> table(rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
              table[r].reserve(grid.size());
              for (const auto& [tx, ty] : grid)
                table[r].push_back(
                    ninej_t(ta, tb, tx, tc, td, ty, rows[r].first, rows[r].second, te));
            }

            for (std::size_t r1 = 0; r1 < rows.size(); ++r1)
              for (std::size_t r2 = r1; r2 < rows.size(); ++r2) {
                Surd acc;
                for (std::size_t g = 0; g < grid.size(); ++g) {
                  Surd term = table[r1][g] * table[r2][g];
                  if (term.is_zero()) continue;
                  acc += term * Rational((grid[g].first + 1) * (grid[g].second + 1));
                }
                acc *= Rational((rows[r1].first + 1) * (rows[r1].second + 1));
                bool same = rows[r1] == rows[r2];
                bool ok = same ? acc == Surd(Rational(1)) : acc.is_zero();
                ++rep.pair_checks;
                if (!ok && rep.all_pass) {
                  rep.all_pass = false;
                  rep.first_failure = "two_j (a,b,c,d,e)=(" + std::to_string(ta) + "," +
                                      std::to_string(tb) + "," + std::to_string(tc) + "," +
                                      std::to_string(td) + "," + std::to_string(te) +
                                      "), rows (" + std::to_string(rows[r1].first) + "," +
                                      std::to_string(rows[r1].second) + ") x (" +
                                      std::to_string(rows[r2].first) + "," +
                                      std::to_string(rows[r2].second) + ")";
                }
              }
          }
  return rep;
}

namespace {

long substituted_twice(long base, long shift, const char* label) {
  long v = base - 2 * shift;
  if (v < 0)
    throw std::domain_error(std::string("substituted argument ") + label +
                            " is negative; index out of range");
  return v;
}

}  // namespace

Surd f_mn_normalized(long x, long y, long m, long n,
                     HalfInt a, HalfInt b, HalfInt c, HalfInt d, long N) {
  if (x < 0 || y < 0 || m < 0 || n < 0 || N < 0)
    throw std::domain_error("grid indices and N must be nonnegative");
  long ta = a.twice(), tb = b.twice(), tc = c.twice(), td = d.twice();
  long tX = substituted_twice(ta + tb, x, "a+b-x");
  long tY = substituted_twice(tc + td, y, "c+d-y");
  long tM = substituted_twice(ta + tc, m, "a+c-m");
  long tN = substituted_twice(tb + td, n, "b+d-n");
  long tE = substituted_twice(ta + tb + tc + td, N, "a+b+c+d-N");

  Int pre2 = Int(tX + 1) * (tM + 1) * (tN + 1) * (tY + 1);
  return Surd::sqrt_of(Rational(pre2)) * ninej_t(ta, tb, tX, tc, td, tY, tM, tN, tE);
}

Rational weight_w_xy(long x, long y, HalfInt a, HalfInt b, HalfInt c, HalfInt d, long N) {
  if (x < 0 || y < 0 || N < 0)
    throw std::domain_error("grid indices and N must be nonnegative");
  long ta = a.twice(), tb = b.twice(), tc = c.twice(), td = d.twice();
  long tX = substituted_twice(ta + tb, x, "a+b-x");
  long tY = substituted_twice(tc + td, y, "c+d-y");
  long tE = substituted_twice(ta + tb + tc + td, N, "a+b+c+d-N");

  // outside the support of the coupling symbol the weight is zero
  if (!triangle_ok(ta, tb, tX) || !triangle_ok(tc, td, tY) ||
      !triangle_ok(ta + tc, tb + td, tE) || !triangle_ok(tX, tY, tE))
    return Rational(0);

  // literal factorial product; every argument is an integer, but not every
  // in-support grid point keeps them all nonnegative (those points only have
  // a finite value through the squared normalized form)
  auto F = [](long v, const char* label) {
    if (v < 0)
      throw std::domain_error(std::string("factorial argument ") + label +
                              " is negative; closed-form weight not evaluable here");
    return factorial(v);
  };

  Rational val(trinomial_coefficient(N, x, y));
  val *= Rational(F(ta - x, "2a-x") * F(ta, "2a") * F(tb, "2b"));
  val *= Rational(F(tc, "2c") * F(td, "2d"));
  Int q0 = F(ta + y - N, "2a+y-N");
  val /= Rational(q0 * q0 * F(tb - x, "2b-x") * F(tc - y, "2c-y") * F(td - y, "2d-y"));
  val *= Rational(ta + tb + 1 - 2 * x, ta + tb + 1 - x);
  val *= Rational(F(ta + tb + y - x - N, "2a+2b+y-x-N"), F(ta + tb - x, "2a+2b-x"));
  val *= Rational(F(ta + tc - N, "2a+2c-N"), F(ta + tc, "2a+2c"));
  val *= Rational(tc + td + 1 - 2 * y, tc + td + 1 - y);
  Int cd2y = F(tc + td - 2 * y, "2c+2d-2y");
  val *= Rational(cd2y, F(tc + td - y, "2c+2d-y"));
  val *= Rational(cd2y, F(tc + td + x - y - N, "2c+2d+x-y-N"));
  val *= Rational(F(tb + td - N, "2b+2d-N"), F(tb + td, "2b+2d"));
  val *= Rational(F(ta + tb + tc + td + 1 - N, "2a+2b+2c+2d+1-N"),
                  F(ta + tb + tc + td + 1 - x - y - N, "2a+2b+2c+2d+1-x-y-N"));

  std::vector<Rational> nu = {Rational(x + y - N), Rational(ta + tb + 1 + y - x - N),
                              Rational(y - tc)};
  std::vector<Rational> de = {Rational(ta + 1 + y - N), Rational(2 * y - tc - td)};
  Rational f32 = hyp_terminating<Rational>(nu, de, Rational(1)).value;
  return val * f32 * f32;
}

Rational racah_polynomial(long n, long x, const RacahParams& rp) {
  if (n < 0 || x < 0 || n > rp.N || x > rp.N)
    throw std::domain_error("polynomial degree and evaluation point must lie in 0..N");
  std::vector<Rational> nu = {Rational(-n), Rational(n) + rp.alpha + rp.beta + 1, Rational(-x),
                              Rational(x) + rp.gamma - rp.N};
  std::vector<Rational> de = {rp.alpha + 1, Rational(-rp.N), rp.beta + rp.gamma + 1};
  return hyp_terminating<Rational>(nu, de, Rational(1)).value;
}

namespace {

Rational poch_checked(const Rational& a, long k, const char* label) {
  Rational r = pochhammer(a, k);
  if (r == 0) throw std::domain_error(std::string("zero denominator factor ") + label);
  return r;
}

}  // namespace

RacahWeights racah_weight_and_norm(const RacahParams& rp) {
  if (rp.N < 0) throw std::domain_error("N must be nonnegative");
  const Rational &al = rp.alpha, &be = rp.beta, &ga = rp.gamma;
  long N = rp.N;

  RacahWeights out;
  out.rho.reserve(N + 1);
  out.h_inv.reserve(N + 1);

  Rational gmN = ga - Rational(N);
  if (gmN == 0) throw std::domain_error("zero denominator factor gamma-N");
  for (long x = 0; x <= N; ++x) {
    Rational v = (gmN + 2 * x) / gmN;
    v *= pochhammer(gmN, x) * pochhammer(al + 1, x) * pochhammer(be + ga + 1, x) *
         pochhammer(Rational(-N), x);
    v /= Rational(factorial(x));
    v /= poch_checked(gmN - al, x, "(gamma-N-alpha)_x");
    v /= poch_checked(-Rational(N) - be, x, "(-N-beta)_x");
    v /= poch_checked(ga + 1, x, "(gamma+1)_x");
    out.rho.push_back(v);
  }

  // The printed norm h_m is a ratio; we hand back its exact reciprocal, so
  // the orthogonality statement  sum_x rho R_m R_n = delta_{mn} * h_inv[m]
  // stays checkable even at parameter points where h_m itself diverges
  // (its denominator factor (-gamma)_N can vanish for integer gamma <= N-1).
  for (long m = 0; m <= N; ++m) {
    Rational v = pochhammer(al + be + 2, N) * pochhammer(-ga, N);
    v *= (al + be + 1) * Rational(factorial(m));
    v *= pochhammer(be + 1, m) * pochhammer(al - ga + 1, m) *
         pochhammer(Rational(N) + al + be + 2, m);
    v /= poch_checked(be + 1, N, "(beta+1)_N");
    v /= poch_checked(al + 1 - ga, N, "(alpha+1-gamma)_N");
    Rational d = al + be + 1 + 2 * m;
    if (d == 0) throw std::domain_error("zero denominator factor alpha+beta+1+2m");
    v /= d;
    v /= poch_checked(al + be + 1, m, "(alpha+beta+1)_m");
    v /= poch_checked(al + 1, m, "(alpha+1)_m");
    v /= poch_checked(be + ga + 1, m, "(beta+gamma+1)_m");
    v /= poch_checked(Rational(-N), m, "(-N)_m");
    out.h_inv.push_back(v);
  }
  return out;
}

}  // namespace cbt
