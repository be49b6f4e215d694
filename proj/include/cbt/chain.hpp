#ifndef CBT_CHAIN_HPP
#define CBT_CHAIN_HPP

// The bivariate cumulative chain on the triangular state space i1+i2 <= N:
// kernel construction (three independent evaluators), stationary
// distribution, fixed-point parameter solving, analytic eigenvalue
// candidates, and verification helpers that arbitrate between them.
//
// Orientation convention, fixed once here and read by every other module:
// kernel matrices are column-stochastic with columns indexing the SOURCE
// state and rows the DESTINATION, entry(r,c) = P(state c -> state r).
// The closed-form double sum below carries its first index pair on the
// destination; that assignment was settled by exact comparison against the
// pathway convolution at N = 1 (see the kernel tests).

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>

#include "cbt/polynomials.hpp"
#include "cbt/rational.hpp"
#include "cbt/scalar.hpp"
#include "cbt/series.hpp"
#include "cbt/surd.hpp"

namespace cbt {

template <class S>
using DenseMatrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using DenseVector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <class S>
struct ChainParams {
  long N = 1;
  S alpha1, alpha2, beta1, beta2;

  void validate() const {
    if (N < 1) throw std::domain_error("N must be a positive integer");
    auto in01 = [](const S& v) { return S(0) < v && v < S(1); };
    if (!in01(alpha1) || !in01(alpha2) || !in01(beta1) || !in01(beta2))
      throw std::domain_error("alpha and beta parameters must lie strictly inside (0,1)");
    if (!(beta1 + beta2 < S(1)))
      throw std::domain_error("beta1 + beta2 must be strictly less than 1");
  }

  S D() const {
    return S(1) + alpha1 * beta1 / (S(1) - alpha1) + alpha2 * beta2 / (S(1) - alpha2);
  }

  // stationary trinomial parameters; complement works out to (1-b1-b2)/D
  EtaPair<S> eta() const {
    S d = D();
    S e1 = beta1 / ((S(1) - alpha1) * d);
    S e2 = beta2 / ((S(1) - alpha2) * d);
    return {e1, e2, S(1) - e1 - e2};
  }
};

// states (i1,i2), i1+i2 <= N, ordered lexicographically: i1 outer, i2 inner
struct StateSpace {
  long N = 0;
  std::vector<std::pair<long, long>> states;

  explicit StateSpace(long n) : N(n) {
    if (n < 1) throw std::domain_error("state space needs N >= 1");
    states.reserve(static_cast<size_t>((n + 1) * (n + 2) / 2));
    for (long i1 = 0; i1 <= n; ++i1)
      for (long i2 = 0; i2 + i1 <= n; ++i2) states.emplace_back(i1, i2);
  }

  long size() const { return static_cast<long>(states.size()); }

  long index(long i1, long i2) const {
    if (i1 < 0 || i2 < 0 || i1 + i2 > N) throw std::domain_error("state outside the triangle");
    return i1 * (N + 1) - i1 * (i1 - 1) / 2 + i2;
  }
};

template <class S>
struct KernelMatrix {
  StateSpace space;
  DenseMatrix<S> M;  // M(r,c) = P(space.states[c] -> space.states[r])
};

template <class S>
S binomial_pmf(long k, long M, const S& alpha) {
  if (k < 0 || M < 0 || k > M) throw std::domain_error("binomial pmf needs 0 <= k <= M");
  S c = scalar_traits<S>::from_rational(Rational(binomial_coefficient(M, k)));
  return c * pow_si(alpha, k) * pow_si(S(1) - alpha, M - k);
}

// Pathway sum: condition on the numbers (k1,k2) of saved successes, then a
// fresh trinomial round over the remaining N-k1-k2 throws.
template <class S>
KernelMatrix<S> kernel_convolution(const ChainParams<S>& cp) {
  cp.validate();
  StateSpace sp(cp.N);
  long n = sp.size();
  EtaPair<S> beta{cp.beta1, cp.beta2, S(1) - cp.beta1 - cp.beta2};
  DenseMatrix<S> M(n, n);
  for (long c = 0; c < n; ++c) {
    auto [i1, i2] = sp.states[c];
    for (long r = 0; r < n; ++r) {
      auto [j1, j2] = sp.states[r];
      S tot(0);
      for (long k1 = 0; k1 <= std::min(i1, j1); ++k1)
        for (long k2 = 0; k2 <= std::min(i2, j2); ++k2)
          tot += binomial_pmf(k1, i1, cp.alpha1) * binomial_pmf(k2, i2, cp.alpha2) *
                 trinomial_pmf(j1 - k1, j2 - k2, cp.N - k1 - k2, beta);
      M(r, c) = tot;
    }
  }
  return {std::move(sp), std::move(M)};
}

// Closed-form double sum over the saved counts, factorials made explicit.
template <class S>
KernelMatrix<S> kernel_closed(const ChainParams<S>& cp) {
  cp.validate();
  StateSpace sp(cp.N);
  long n = sp.size();
  auto fr = [](const Int& v) { return scalar_traits<S>::from_rational(Rational(v)); };
  DenseMatrix<S> M(n, n);
  for (long c = 0; c < n; ++c) {
    auto [i1, i2] = sp.states[c];
    S src = fr(factorial(i1) * factorial(i2)) * pow_si(S(1) - cp.alpha1, i1) *
            pow_si(S(1) - cp.alpha2, i2);
    S g1 = cp.alpha1 / ((S(1) - cp.alpha1) * cp.beta1);
    S g2 = cp.alpha2 / ((S(1) - cp.alpha2) * cp.beta2);
    for (long r = 0; r < n; ++r) {
      auto [j1, j2] = sp.states[r];
      S pre = src * pow_si(cp.beta1, j1) * pow_si(cp.beta2, j2) *
              pow_si(S(1) - cp.beta1 - cp.beta2, cp.N - j1 - j2) /
              fr(factorial(cp.N - j1 - j2));
      S sum(0);
      for (long k1 = 0; k1 <= std::min(i1, j1); ++k1)
        for (long k2 = 0; k2 <= std::min(i2, j2); ++k2)
          sum += pow_si(g1, k1) * pow_si(g2, k2) *
                 scalar_traits<S>::from_rational(
                     Rational(factorial(cp.N - k1 - k2),
                              factorial(i1 - k1) * factorial(i2 - k2) * factorial(j1 - k1) *
                                  factorial(j2 - k2) * factorial(k1) * factorial(k2)));
      M(r, c) = pre * sum;
    }
  }
  return {std::move(sp), std::move(M)};
}

// Hypergeometric form: trinomial prefactor in the destination indices times
// a terminating double sum with negative arguments.
template <class S>
KernelMatrix<S> kernel_f3(const ChainParams<S>& cp) {
  cp.validate();
  StateSpace sp(cp.N);
  long n = sp.size();
  EtaPair<S> beta{cp.beta1, cp.beta2, S(1) - cp.beta1 - cp.beta2};
  S x1 = cp.alpha1 / (cp.beta1 * (cp.alpha1 - S(1)));
  S x2 = cp.alpha2 / (cp.beta2 * (cp.alpha2 - S(1)));
  DenseMatrix<S> M(n, n);
  for (long r = 0; r < n; ++r) {
    auto [i1, i2] = sp.states[r];  // destination carries the trinomial factor
    S dst = trinomial_pmf(i1, i2, cp.N, beta);
    for (long c = 0; c < n; ++c) {
      auto [j1, j2] = sp.states[c];
      S f3 = appell_f3(S(-i1), S(-i2), S(-j1), S(-j2), S(-cp.N), x1, x2).value;
      M(r, c) = dst * pow_si(S(1) - cp.alpha1, j1) * pow_si(S(1) - cp.alpha2, j2) * f3;
    }
  }
  return {std::move(sp), std::move(M)};
}

template <class S>
DenseVector<S> stationary_distribution(const ChainParams<S>& cp) {
  cp.validate();
  StateSpace sp(cp.N);
  EtaPair<S> eta = cp.eta();
  DenseVector<S> psi(sp.size());
  for (long i = 0; i < sp.size(); ++i)
    psi(i) = trinomial_pmf(sp.states[i].first, sp.states[i].second, cp.N, eta);
  return psi;
}

enum class RootBranch { plus, minus, degenerate };

template <class S>
struct FixedPointSolution {
  S t, u, v, w;
  RootBranch branch = RootBranch::degenerate;  // which root was assigned to t
  bool is_degenerate = false;                  // alpha1 == alpha2 collapse
  S discriminant;
};

// Residuals of the four stationarity relations the parameters must satisfy:
//   t (1 - b1 t - b2 u) = a1 ((1-b1) t - b2 u)
//   u (1 - b1 t - b2 u) = a2 ((1-b2) u - b1 t)
// and the same pair again with (v,w) in place of (t,u). All four vanish at
// a valid solution.
template <class S>
std::array<S, 4> fixed_point_residuals(const FixedPointSolution<S>& s, const ChainParams<S>& cp) {
  const S &a1 = cp.alpha1, &a2 = cp.alpha2, &b1 = cp.beta1, &b2 = cp.beta2;
  auto pair_resid = [&](const S& t, const S& u) {
    S common = S(1) - b1 * t - b2 * u;
    return std::array<S, 2>{t * common - a1 * ((S(1) - b1) * t - b2 * u),
                            u * common - a2 * ((S(1) - b2) * u - b1 * t)};
  };
  auto r12 = pair_resid(s.t, s.u);
  auto r34 = pair_resid(s.v, s.w);
  return {r12[0], r12[1], r34[0], r34[1]};
}

namespace detail {

// square root dispatch: exact for rationals (perfect squares only), plain
// sqrt for the float backend
inline Rational scalar_sqrt(const Rational& v) {
  Surd s = Surd::sqrt_of(v);
  if (!s.is_rational())
    throw std::domain_error("discriminant is not a perfect rational square; use the double backend");
  return s.coefficient();
}
inline double scalar_sqrt(double v) { return std::sqrt(v); }

}  // namespace detail

// Solves the fixed-point relations. With A = a1-a2, P = a1 b1, Q = a2 b2 the
// discriminant is computed by both printed arrangements,
//   (A+P+Q)^2 - 4AP   and   (A-P+Q)^2 + 4 a1 a2 b1 b2,
// which must agree (the second shows it is never negative). Nondegenerate
// parameters give two roots for t; both assignments of the roots to the
// pairs (t,u) / (v,w) are returned, first element carrying the plus root on
// t. Degenerate parameters (a1 == a2) collapse to t = u = v = w and both
// returned solutions coincide.
template <class S>
std::pair<FixedPointSolution<S>, FixedPointSolution<S>> solve_fixed_points(
    const ChainParams<S>& cp) {
  cp.validate();
  const S &a1 = cp.alpha1, &a2 = cp.alpha2, &b1 = cp.beta1, &b2 = cp.beta2;
  S A = a1 - a2, P = a1 * b1, Q = a2 * b2;
  S disc = (A + P + Q) * (A + P + Q) - S(4) * A * P;
  S disc2 = (A - P + Q) * (A - P + Q) + S(4) * a1 * a2 * b1 * b2;
  if constexpr (std::is_same_v<S, Rational>) {
    if (disc != disc2) throw std::logic_error("discriminant arrangements disagree");
  } else {
    if (std::abs(disc - disc2) > 1e-12 * (std::abs(disc) + 1))
      throw std::logic_error("discriminant arrangements disagree");
    disc = disc2;  // the sum-of-squares arrangement cannot go negative
  }

  if (A == S(0)) {
    S t = (S(1) - a1 * (S(1) - b1 - b2)) / (b1 + b2);
    FixedPointSolution<S> s{t, t, t, t, RootBranch::degenerate, true, disc};
    return {s, s};
  }

  S sd = detail::scalar_sqrt(disc);
  auto root = [&](const S& sign) {
    S X = (S(1) - a1) * (A + P + Q + sign * sd) / (S(2) * b1 * A);
    S t = a1 + X;
    if (t == a1) throw std::domain_error("fixed point t coincides with alpha1; u relation divides by zero");
    S u = (-b1 * t + t * (S(1) - a1) / (t - a1)) / b2;
    return std::pair<S, S>{t, u};
  };
  auto [tp, up] = root(S(1));
  auto [tm, um] = root(S(-1));
  FixedPointSolution<S> first{tp, up, tm, um, RootBranch::plus, false, disc};
  FixedPointSolution<S> second{tm, um, tp, up, RootBranch::minus, false, disc};
  return {first, second};
}

// ---- spectral verification (float backend; declarations, see chain.cpp) ----

// one analytic eigenvalue formula, evaluated over all degree pairs
// (m,n), m+n <= N, listed in StateSpace order
struct EigenvalueCandidate {
  std::string label;
  std::vector<double> values;
};

// Emits every closed-form candidate in play: the fixed-point product form
// for both branch assignments, the split product of the two quadratic roots
// of the half-trace, and the single-root power form (which collapses to
// alpha^(m+n) in the degenerate case).
std::vector<EigenvalueCandidate> eigenvalues_analytic(
    const ChainParams<double>& cp,
    const std::pair<FixedPointSolution<double>, FixedPointSolution<double>>& fp);

struct OrientationResult {
  std::string label;
  double lambda = 0;    // Rayleigh quotient for this orientation
  double residual = 0;  // ||K phi - lambda phi||_inf / ||phi||_inf
};

struct EigenCheck {
  std::array<OrientationResult, 4> orientations;
  int best = 0;  // index of the smallest residual
};

// Builds phi(i1,i2) = P_{m,n}(i1,i2) from the fixed-point parameters and
// applies the kernel in four orientations: plain, transposed, and both again
// with phi premultiplied by the stationary weights.
EigenCheck verify_eigen(const ChainParams<double>& cp, const FixedPointSolution<double>& fp,
                        long m, long n);

struct SpectrumReport {
  std::vector<double> numeric;  // eigenvalues, descending
  struct Candidate {
    std::string label;
    double max_deviation = 0;
    bool matched = false;
  };
  std::vector<Candidate> candidates;
  std::string verdict;  // which analytic formula the numeric spectrum follows
};

// Dense spectral oracle: symmetrizes the kernel by the stationary similarity
// transform, diagonalizes, and matches the sorted spectrum against each
// analytic candidate within 1e-9.
SpectrumReport verify_spectrum(const ChainParams<double>& cp);

}  // namespace cbt

#endif
