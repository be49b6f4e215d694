#ifndef CBT_SERIES_HPP
#define CBT_SERIES_HPP

// Terminating hypergeometric-type sums over a generic scalar backend.
//
// Everything here is a finite sum: at least one numerator parameter must be a
// nonpositive integer, which cuts the series off. A denominator parameter
// that reaches zero strictly before that cutoff is a hard error; at or after
// the cutoff it never gets used, so it is ignored. The float backend snaps
// parameters within 1e-9 of a nonpositive integer (see scalar.hpp).

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbt/scalar.hpp"

namespace cbt {

template <class S>
struct SeriesValue {
  S value;
  long term_count;  // number of nonzero terms actually summed
};

class nonterminating_series : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class series_domain_error : public std::domain_error {
 public:
  series_domain_error(const std::string& what, long index_1based)
      : std::domain_error(what), param_index(index_1based) {}
  long param_index;  // 1-based position of the offending denominator parameter
};

class unbalanced_series : public std::domain_error {
 public:
  unbalanced_series(const std::string& what, double resid)
      : std::domain_error(what), residual(resid) {}
  double residual;  // a+b+c+1-d-e-f-n, approximated for the exact backend
};

template <class S>
S pochhammer(const S& a, long k) {
  if (k < 0) throw std::domain_error("pochhammer order must be nonnegative");
  S r(1);
  for (long i = 0; i < k; ++i) r *= (a + S(i));
  return r;
}

namespace detail {

// (a)_k for k = 0..kmax
template <class S>
std::vector<S> poch_table(const S& a, long kmax) {
  std::vector<S> t(static_cast<size_t>(kmax) + 1);
  t[0] = S(1);
  for (long k = 0; k < kmax; ++k) t[k + 1] = t[k] * (a + S(k));
  return t;
}

template <class S>
std::vector<S> power_table(const S& x, long kmax) {
  std::vector<S> t(static_cast<size_t>(kmax) + 1);
  t[0] = S(1);
  for (long k = 0; k < kmax; ++k) t[k + 1] = t[k] * x;
  return t;
}

template <class S>
std::vector<S> factorial_table(long kmax) {
  std::vector<S> t(static_cast<size_t>(kmax) + 1);
  t[0] = S(1);
  for (long k = 1; k <= kmax; ++k) t[k] = t[k - 1] * S(k);
  return t;
}

}  // namespace detail

// Generalized pFq at argument z, p and q set by the list lengths.
// Covers the 2F1 / 3F2 / 4F3 shapes used throughout.
template <class S>
SeriesValue<S> hyp_terminating(std::vector<S> numer, std::vector<S> denom, const S& z) {
  using T = scalar_traits<S>;
  for (auto& a : numer) a = T::snap(a);
  for (auto& d : denom) d = T::snap(d);

  std::optional<long> kmax;
  for (const auto& a : numer)
    if (auto t = as_nonpositive_integer(a)) kmax = kmax ? std::min(*kmax, -*t) : -*t;
  if (!kmax)
    throw nonterminating_series("no numerator parameter is a nonpositive integer; series does not terminate");

  for (size_t i = 0; i < denom.size(); ++i)
    if (auto t = as_nonpositive_integer(denom[i]); t && -*t < *kmax)
      throw series_domain_error(
          "denominator parameter " + std::to_string(i + 1) + " vanishes at term " +
              std::to_string(-*t + 1) + ", before termination at term " + std::to_string(*kmax + 1),
          static_cast<long>(i + 1));

  S sum(0), term(1);
  long count = 0;
  for (long k = 0;; ++k) {
    if (!T::is_zero(term)) {
      sum += term;
      ++count;
    }
    if (k == *kmax) break;
    S step = z;
    for (const auto& a : numer) step *= (a + S(k));
    for (const auto& d : denom) step /= (d + S(k));
    term *= step / S(k + 1);
    if (T::is_zero(term)) break;  // a numerator factor hit zero; every later term is zero too
  }
  return {sum, count};
}

template <class S>
struct WhippleTransformed {
  std::array<S, 4> numer;
  std::array<S, 3> denom;
  S prefactor;  // prefactor * F(transformed; 1) = F(original; 1)
};

// Parameter rewrite for a terminating balanced 4F3 at unit argument.
// Slot convention: numer = (-n, a, b, c) with n >= 0 integer in slot 0,
// denom = (d, e, f); balance means a+b+c+1 = d+e+f+n. The rewritten series
// keeps -n in slot 0, carries (a, d-b, d-c) against (d, 1+a-e-n, 1+a-f-n),
// and is again balanced, so the rewrite can be applied repeatedly.
template <class S>
WhippleTransformed<S> whipple_transform(std::array<S, 4> numer, std::array<S, 3> denom) {
  using T = scalar_traits<S>;
  for (auto& a : numer) a = T::snap(a);
  for (auto& d : denom) d = T::snap(d);

  auto n0 = as_nonpositive_integer(numer[0]);
  if (!n0)
    throw nonterminating_series("slot 0 of the numerator must hold the terminating parameter -n");
  long n = -*n0;

  const S& a = numer[1];
  const S& b = numer[2];
  const S& c = numer[3];
  const S& d = denom[0];
  const S& e = denom[1];
  const S& f = denom[2];

  S resid = a + b + c + S(1) - d - e - f - S(n);
  if (!T::is_zero(T::snap(resid))) {
    double approx;
    if constexpr (std::is_same_v<S, double>)
      approx = resid;
    else
      approx = to_double(resid);
    throw unbalanced_series("parameter tuple is not balanced, residual " + std::to_string(approx), approx);
  }

  S pe = pochhammer(e, n), pf = pochhammer(f, n);
  if (T::is_zero(pe) || T::is_zero(pf))
    throw series_domain_error("prefactor denominator pochhammer vanishes", T::is_zero(pe) ? 2 : 3);

  WhippleTransformed<S> out;
  out.numer = {numer[0], a, d - b, d - c};
  out.denom = {d, S(1) + a - e - S(n), S(1) + a - f - S(n)};
  out.prefactor = pochhammer(e - a, n) * pochhammer(f - a, n) / (pe * pf);
  return out;
}

// Double sum  sum_{i,j} (a)_{i+j} (b)_i (c)_j x^i y^j / (i! j! (d)_{i+j}).
// Terminates when a is a nonpositive integer, or b and c both are.
template <class S>
SeriesValue<S> appell_f1(S a, S b, S c, S d, const S& x, const S& y) {
  using T = scalar_traits<S>;
  a = T::snap(a);
  b = T::snap(b);
  c = T::snap(c);
  d = T::snap(d);

  auto na = as_nonpositive_integer(a);
  auto nb = as_nonpositive_integer(b);
  auto nc = as_nonpositive_integer(c);
  long bi, bj, bij;
  if (na) {
    bij = -*na;
    bi = nb ? std::min(bij, -*nb) : bij;
    bj = nc ? std::min(bij, -*nc) : bij;
  } else if (nb && nc) {
    bi = -*nb;
    bj = -*nc;
    bij = bi + bj;
  } else {
    throw nonterminating_series("double sum does not terminate: need a, or both b and c, nonpositive integers");
  }
  if (auto nd = as_nonpositive_integer(d); nd && -*nd < bij)
    throw series_domain_error("denominator parameter vanishes before the double sum terminates", 1);

  auto pa = detail::poch_table(a, bij);
  auto pb = detail::poch_table(b, bi);
  auto pc = detail::poch_table(c, bj);
  auto pd = detail::poch_table(d, bij);
  auto px = detail::power_table(x, bi);
  auto py = detail::power_table(y, bj);
  auto fct = detail::factorial_table<S>(std::max(bi, bj));

  S sum(0);
  long count = 0;
  for (long i = 0; i <= bi; ++i)
    for (long j = 0; j <= bj && i + j <= bij; ++j) {
      S num = pa[i + j] * pb[i] * pc[j] * px[i] * py[j];
      if (T::is_zero(num)) continue;
      sum += num / (fct[i] * fct[j] * pd[i + j]);
      ++count;
    }
  return {sum, count};
}

// Double sum  sum_{r,s} (a)_r (a2)_r (b)_s (b2)_s x^r y^s / (r! s! (c)_{r+s}).
// The pair (a, a2) runs with r and x; the pair (b, b2) with s and y.
template <class S>
SeriesValue<S> appell_f3(S a, S b, S a2, S b2, S c, const S& x, const S& y) {
  using T = scalar_traits<S>;
  a = T::snap(a);
  b = T::snap(b);
  a2 = T::snap(a2);
  b2 = T::snap(b2);
  c = T::snap(c);

  auto pick = [](std::optional<long> u, std::optional<long> v) -> std::optional<long> {
    if (u && v) return std::min(-*u, -*v);
    if (u) return -*u;
    if (v) return -*v;
    return std::nullopt;
  };
  auto br = pick(as_nonpositive_integer(a), as_nonpositive_integer(a2));
  auto bs = pick(as_nonpositive_integer(b), as_nonpositive_integer(b2));
  if (!br || !bs)
    throw nonterminating_series("double sum does not terminate: each of the pairs (a,a2), (b,b2) needs a nonpositive integer");
  if (auto nc = as_nonpositive_integer(c); nc && -*nc < *br + *bs)
    throw series_domain_error("denominator parameter vanishes before the double sum terminates", 1);

  auto pa = detail::poch_table(a, *br);
  auto pa2 = detail::poch_table(a2, *br);
  auto pb = detail::poch_table(b, *bs);
  auto pb2 = detail::poch_table(b2, *bs);
  auto pc = detail::poch_table(c, *br + *bs);
  auto px = detail::power_table(x, *br);
  auto py = detail::power_table(y, *bs);
  auto fct = detail::factorial_table<S>(std::max(*br, *bs));

  S sum(0);
  long count = 0;
  for (long r = 0; r <= *br; ++r)
    for (long s = 0; s <= *bs; ++s) {
      S num = pa[r] * pa2[r] * pb[s] * pb2[s] * px[r] * py[s];
      if (T::is_zero(num)) continue;
      sum += num / (fct[r] * fct[s] * pc[r + s]);
      ++count;
    }
  return {sum, count};
}

// Quadruple sum
//   sum (a)_{i+j} (a2)_{k+l} (b)_{i+k} (c)_{j+l} lam^i mu^j nu^k rho^l
//        / ( i! j! k! l! (d)_{i+j+k+l} ).
// Both a and a2 must be nonpositive integers; they bound i+j and k+l.
template <class S>
SeriesValue<S> f1_iterated(S a, S a2, S b, S c, S d,
                           const S& lam, const S& mu, const S& nu, const S& rho) {
  using T = scalar_traits<S>;
  a = T::snap(a);
  a2 = T::snap(a2);
  b = T::snap(b);
  c = T::snap(c);
  d = T::snap(d);

  auto na = as_nonpositive_integer(a);
  auto na2 = as_nonpositive_integer(a2);
  if (!na || !na2)
    throw nonterminating_series("quadruple sum does not terminate: a and a2 must be nonpositive integers");
  long A = -*na, B = -*na2;
  if (auto nd = as_nonpositive_integer(d); nd && -*nd < A + B)
    throw series_domain_error("denominator parameter vanishes before the quadruple sum terminates", 1);

  auto pa = detail::poch_table(a, A);
  auto pa2 = detail::poch_table(a2, B);
  auto pb = detail::poch_table(b, A + B);
  auto pc = detail::poch_table(c, A + B);
  auto pd = detail::poch_table(d, A + B);
  auto pl = detail::power_table(lam, A);
  auto pm = detail::power_table(mu, A);
  auto pn = detail::power_table(nu, B);
  auto pr = detail::power_table(rho, B);
  auto fct = detail::factorial_table<S>(std::max(A, B));

  S sum(0);
  long count = 0;
  for (long i = 0; i <= A; ++i)
    for (long j = 0; i + j <= A; ++j) {
      S left = pa[i + j] * pl[i] * pm[j];
      if (T::is_zero(left)) continue;
      left /= fct[i] * fct[j];
      for (long k = 0; k <= B; ++k)
        for (long l = 0; k + l <= B; ++l) {
          S num = pa2[k + l] * pb[i + k] * pc[j + l] * pn[k] * pr[l];
          if (T::is_zero(num)) continue;
          sum += left * num / (fct[k] * fct[l] * pd[i + j + k + l]);
          ++count;
        }
    }
  return {sum, count};
}

}  // namespace cbt

#endif
