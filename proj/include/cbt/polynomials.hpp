#ifndef CBT_POLYNOMIALS_HPP
#define CBT_POLYNOMIALS_HPP

// Bivariate Krawtchouk polynomials P_{m,n}(x,y) on the triangular grid
// x+y <= N, parametrized either directly by (t,u,v,w) or through a positive
// quadruple (p1..p4) that also fixes the trinomial weight and its dual. Three
// independent evaluators are provided (quadruple sum, factored double sum,
// and a literal closed form for the orthonormal functions) so they can be
// cross-checked against each other.
//
// Backend rule: identity work runs on Rational p; the plain-scalar entry
// points also take double (t,u,v,w) for parameters solved numerically
// elsewhere. Weight-dependent operations reject the degenerate case
// p1*p4 == p2*p3 (the weight's complement mass collapses to zero); bare
// polynomial evaluation does not care.

#include <stdexcept>
#include <string>

#include "cbt/rational.hpp"
#include "cbt/scalar.hpp"
#include "cbt/series.hpp"
#include "cbt/surd.hpp"

namespace cbt {

struct GridPoint {
  long x = 0, y = 0, N = 0;
  bool valid() const { return x >= 0 && y >= 0 && N >= 0 && x + y <= N; }
};

struct PParams {
  Rational p1, p2, p3, p4;

  Rational sum() const { return p1 + p2 + p3 + p4; }
  bool degenerate() const { return p1 * p4 == p2 * p3; }

  void require_positive() const {
    if (p1 <= 0 || p2 <= 0 || p3 <= 0 || p4 <= 0)
      throw std::domain_error("p parameters must be strictly positive");
  }
  void require_weight() const {
    require_positive();
    if (degenerate())
      throw std::domain_error("degenerate weight: p1*p4 equals p2*p3, complement mass is zero");
  }
};

template <class S>
struct EtaPair {
  S eta1, eta2;
  S complement;  // 1 - eta1 - eta2
};

template <class S>
struct TUVWParams {
  S t, u, v, w;
};

inline EtaPair<Rational> eta_from_p(const PParams& p) {
  p.require_weight();
  Rational S = p.sum();
  Rational e1 = p.p1 * p.p2 * S / ((p.p1 + p.p2) * (p.p1 + p.p3) * (p.p2 + p.p4));
  Rational e2 = p.p3 * p.p4 * S / ((p.p1 + p.p3) * (p.p4 + p.p2) * (p.p4 + p.p3));
  return {e1, e2, 1 - e1 - e2};
}

// dual weight parameters: same complement mass as eta_from_p, exactly
inline EtaPair<Rational> etabar_from_p(const PParams& p) {
  p.require_weight();
  Rational S = p.sum();
  Rational e1 = p.p1 * p.p3 * S / ((p.p1 + p.p2) * (p.p1 + p.p3) * (p.p3 + p.p4));
  Rational e2 = p.p2 * p.p4 * S / ((p.p1 + p.p2) * (p.p2 + p.p4) * (p.p4 + p.p3));
  return {e1, e2, 1 - e1 - e2};
}

inline TUVWParams<Rational> tuvw_from_p(const PParams& p) {
  p.require_positive();
  Rational S = p.sum();
  return {(p.p1 + p.p2) * (p.p1 + p.p3) / (p.p1 * S),
          (p.p1 + p.p3) * (p.p4 + p.p3) / (p.p3 * S),
          (p.p1 + p.p2) * (p.p2 + p.p4) / (p.p2 * S),
          (p.p4 + p.p2) * (p.p4 + p.p3) / (p.p4 * S)};
}

namespace detail {

inline void require_grid(long x, long y, long N, const char* what) {
  if (x < 0 || y < 0 || N < 0 || x + y > N)
    throw std::domain_error(std::string(what) + " must satisfy 0 <= x, 0 <= y, x+y <= N");
}

}  // namespace detail

// mass of the trinomial distribution at (x,y): C(N;x,y) eta1^x eta2^y comp^(N-x-y)
template <class S>
S trinomial_pmf(long x, long y, long N, const EtaPair<S>& eta) {
  detail::require_grid(x, y, N, "pmf argument");
  S tri = scalar_traits<S>::from_rational(Rational(trinomial_coefficient(N, x, y)));
  return tri * pow_si(eta.eta1, x) * pow_si(eta.eta2, y) * pow_si(eta.complement, N - x - y);
}

// Quadruple-sum evaluator:
//   P_{m,n}(x,y) = sum (-m)_{i+j} (-n)_{k+l} (-x)_{i+k} (-y)_{j+l}
//                      t^i u^j v^k w^l / ( i! j! k! l! (-N)_{i+j+k+l} ).
template <class S>
S poly_P(long m, long n, long x, long y, long N, const TUVWParams<S>& par) {
  detail::require_grid(m, n, N, "degree pair");
  detail::require_grid(x, y, N, "grid point");
  return f1_iterated(S(-m), S(-n), S(-x), S(-y), S(-N), par.t, par.u, par.v, par.w).value;
}

// Factored evaluator: an outer double sum over (i,j) against an inner
// two-variable sum in transformed arguments, with prefactor (1-v)^n (or
// (1-w)^n when v == 1). Algebraically equal to poly_P; kept as an
// independent route for cross-checking. When v == w == 1 both factored
// forms divide by zero, so the call falls through to poly_P.
template <class S>
S poly_P_alt(long m, long n, long x, long y, long N, const TUVWParams<S>& par) {
  detail::require_grid(m, n, N, "degree pair");
  detail::require_grid(x, y, N, "grid point");
  const S one(1);
  bool use_v = !(par.v == one);
  if (!use_v && par.w == one) return poly_P(m, n, x, y, N, par);

  S lam, mu, pre;
  if (use_v) {
    S dv = par.v - one;
    lam = par.v / dv;
    mu = (par.v - par.w) / dv;
    pre = pow_si(one - par.v, n);
  } else {
    S dw = par.w - one;
    lam = (par.w - par.v) / dw;
    mu = par.w / dw;
    pre = pow_si(one - par.w, n);
  }

  auto fct = detail::factorial_table<S>(std::max(m, std::max(x, y)) + 1);
  S sum(0);
  for (long i = 0; i <= std::min(m, x); ++i)
    for (long j = 0; i + j <= m && j <= y; ++j) {
      S num = pochhammer(S(-m), i + j) * pochhammer(S(-x), i) * pochhammer(S(-y), j) *
              pow_si(par.t, i) * pow_si(par.u, j);
      if (scalar_traits<S>::is_zero(num)) continue;
      S inner;
      if (use_v)
        inner = appell_f1(S(-n), S(x + y - N), S(j - y), S(i + j - N), lam, mu).value;
      else
        inner = appell_f1(S(-n), S(i - x), S(x + y - N), S(i + j - N), lam, mu).value;
      sum += num * inner / (fct[i] * fct[j] * pochhammer(S(-N), i + j));
    }
  return pre * sum;
}

// Orthonormal functions R_{m,n}(x,y): the polynomial scaled by the square
// root of (weight mass at (x,y)) * (dual weight mass at (m,n)) / comp^N.
// These satisfy  sum_{x+y<=N} R_{m,n} R_{m',n'} = delta delta  exactly.
inline Surd orthonormal_R(long m, long n, long x, long y, long N, const PParams& p) {
  detail::require_grid(m, n, N, "degree pair");
  detail::require_grid(x, y, N, "grid point");
  EtaPair<Rational> eta = eta_from_p(p);
  EtaPair<Rational> etab = etabar_from_p(p);
  Rational rad = trinomial_pmf(x, y, N, eta) * trinomial_pmf(m, n, N, etab) *
                 pow_si(eta.complement, -N);
  return Surd::sqrt_of(rad) * poly_P(m, n, x, y, N, tuvw_from_p(p));
}

// Literal closed form of the orthonormal functions: a square-rooted power
// product times a single sum whose terms carry three 2F1 factors. Third
// independent evaluator; equals orthonormal_R on the whole grid (checked in
// tests, sign included).
//
// The middle 2F1 carries prefactor (-y)_n, which vanishes for n > y while
// the full expression stays finite. That branch is evaluated as the joint
// limit of prefactor times series: terms k < n-y drop, and for k >= n-y the
// ratio (-y)_n / (y-n+1)_k is replaced by its limit (-1)^n y! / (k-n+y)!.
// The limit fixes the sign of the whole branch; the sign chosen here is the
// one that agrees with orthonormal_R (the continuation argument alone
// leaves a global sign open, see the design notes in the tests).
inline Surd r_mn_explicit(long m, long n, long x, long y, long N, const PParams& p) {
  detail::require_grid(m, n, N, "degree pair");
  detail::require_grid(x, y, N, "grid point");
  p.require_weight();
  const Rational &p1 = p.p1, &p2 = p.p2, &p3 = p.p3, &p4 = p.p4;
  Rational S = p.sum();

  Rational rad = Rational(trinomial_coefficient(N, x, y) * trinomial_coefficient(N, m, n));
  rad *= pow_si(p1, 2 * N - 2 * y - x - m) * pow_si(p2, x + n) * pow_si(p3, y + m) *
         pow_si(p4, y - n);
  rad *= pow_si(p1 + p2, y - N) * pow_si(p1 + p3, n - N) * pow_si(p2 + p4, N - m - 2 * y) *
         pow_si(p3 + p4, N - x - 2 * y) * pow_si(S, m - n + x + y);
  if (rad < 0) throw std::domain_error("negative radicand in closed-form prefactor");

  Rational z0 = p2 * p3 * S / (p1 * (p2 + p4) * (p3 + p4));
  Rational z1 = (p1 + p2) * (p2 + p3 + p4) / (p2 * S);
  Rational z2 = -p4 * (p2 + p3 + p4) / (p2 * p3);
  Rational z3 = (p1 + p3) * (p2 + p3 + p4) / (p3 * S);

  Rational total(0);
  Rational coef(1);  // (y-N)_l z0^l / l!
  for (long l = 0; l <= N - y; ++l) {
    if (coef != 0) {
      Rational f1 = hyp_terminating<Rational>({Rational(-l), Rational(-x)},
                                              {Rational(y - N)}, z1)
                        .value;
      Rational f2;
      if (n <= y) {
        f2 = pochhammer(Rational(-y), n) *
             hyp_terminating<Rational>({Rational(-l), Rational(-n)},
                                       {Rational(y - n + 1)}, z2)
                 .value;
      } else {
        f2 = 0;
        Rational zp = pow_si(z2, n - y);
        for (long k = n - y; k <= std::min(l, n); ++k) {
          Rational nu = pochhammer(Rational(-l), k) * pochhammer(Rational(-n), k);
          if (nu != 0) {
            Rational ratio = Rational((n % 2 == 0 ? 1 : -1) * factorial(y), factorial(k - n + y));
            f2 += nu * zp * ratio / Rational(factorial(k));
          }
          zp *= z2;
        }
      }
      Rational f3 = hyp_terminating<Rational>({Rational(n - y - l), Rational(-m)},
                                              {Rational(n - N)}, z3)
                        .value;
      total += coef * f1 * f2 * f3;
    }
    coef *= Rational(y - N + l) * z0 / Rational(l + 1);
  }
  total *= pow_si(p2 + p3 + p4, y - N) / pochhammer(Rational(-N), n);
  return Surd::sqrt_of(rad) * total;
}

}  // namespace cbt

#endif
