#ifndef CBT_ANGULAR_HPP
#define CBT_ANGULAR_HPP

// Recoupling coefficients for four angular momenta, all in exact surd
// arithmetic: triangle factors, the W function, the 3x3 coupling symbol built
// from it, the normalized bivariate functions F_{m,n} carried by it, and the
// closed-form weight those functions square to. Also the one-variable
// hypergeometric orthogonal family (with its weight and norms) that shows up
// in the same circle of identities.
//
// Convention used everywhere: a coupling triple that fails the triangle
// condition (or has non-integer perimeter) makes the value zero, never an
// error, so orthogonality sums can range freely. Index arguments that drive
// a *substituted* angular momentum negative are errors: that is a caller
// range violation, not a physical zero.

#include <vector>

#include "cbt/halfint.hpp"
#include "cbt/rational.hpp"
#include "cbt/surd.hpp"

namespace cbt {

// sqrt[ (a+b-c)! (a-b+c)! (b+c-a)! / (a+b+c+1)! ], zero when the triple
// violates the triangle condition or a+b+c is not an integer
Surd triangle_delta(HalfInt a, HalfInt b, HalfInt c);

// W(a e b y; k x): triangle prefactor times a terminating 4F3 at unit
// argument. Zero when any of the triangles (a,b,x), (b,y,k), (x,y,e),
// (a,e,k) fails. Values are memoized internally.
Surd racah_w(HalfInt a, HalfInt e, HalfInt b, HalfInt y, HalfInt k, HalfInt x);

// row-major 3x3 layout: rows (a,b,x), (c,d,y), (m,n,e)
struct NineJArgs {
  HalfInt a, b, x, c, d, y, m, n, e;
};

// sum_k (2k+1) W(a e c n; k m) W(a e b y; k x) W(b y n c; k d).
// Every k-term shares one radicand (each k-dependent triangle factor occurs
// in exactly two of the three W factors), so the surd sum is closed; the
// addition operator asserts this at runtime.
Surd ninej(const NineJArgs& args);

struct NineJOrthogonalityReport {
  long families = 0;          // (a,b,c,d,e) argument sets carrying at least one valid bottom row
  long pair_checks = 0;       // unordered bottom-row pairs whose delta identity was verified
  bool all_pass = true;
  std::string first_failure;  // empty unless some delta identity failed
};

// Unitarity of the recoupling between the two pairings of four angular
// momenta: for every (a,b,c,d,e) with all two_j <= max_two_j and every pair
// of valid bottom rows (m,n), (m',n') (two_j <= max_two_j as well),
//   sum_{x,y} (2x+1)(2y+1)(2m+1)(2n+1) {a b x; c d y; m n e}
//                                      {a b x; c d y; m' n' e}
//     = delta_mm' delta_nn',
// with x, y running over their full coupling ranges. All sums run in surd
// arithmetic, so the shared-radicand closure is asserted on every addition.
NineJOrthogonalityReport ninej_orthogonality_sweep(long max_two_j);

// Normalized bivariate function: sqrt[(2a+2b+1-2x)(2a+2c+1-2m)(2b+2d+1-2n)
// (2c+2d+1-2y)] times the coupling symbol with substituted arguments
//   (a, b, a+b-x; c, d, c+d-y; a+c-m, b+d-n, a+b+c+d-N).
// Throws if a substituted argument is negative.
Surd f_mn_normalized(long x, long y, long m, long n,
                     HalfInt a, HalfInt b, HalfInt c, HalfInt d, long N);

// Closed-form weight at grid point (x,y): a factorial product times the
// square of a terminating 3F2 at unit argument. Equals
// f_mn_normalized(x,y,0,0,...)^2 wherever the factorial product is defined;
// grid points whose closed form hits a negative factorial argument throw
// even though the squared form is finite there (see weight tests).
Rational weight_w_xy(long x, long y, HalfInt a, HalfInt b, HalfInt c, HalfInt d, long N);

struct RacahParams {
  Rational alpha, beta, gamma;
  long N = 0;
};

// R_n(x) as a balanced terminating 4F3 at unit argument
Rational racah_polynomial(long n, long x, const RacahParams& rp);

struct RacahWeights {
  std::vector<Rational> rho;    // weight over x = 0..N
  std::vector<Rational> h_inv;  // reciprocal norms over m = 0..N
};

// Weight rho(x) and reciprocal norm factors 1/h_m, both exact, satisfying
//   sum_x rho(x) R_m(x) R_n(x) = delta_{mn} * h_inv[m].
// The reciprocal is the robust quantity: at integer gamma <= N-1 the norm
// h_m itself diverges (a Pochhammer factor in its denominator vanishes)
// while h_inv is exactly zero and the identity above still holds. Parameter
// choices that zero a denominator of rho or of h_inv throw, naming the
// offending factor.
RacahWeights racah_weight_and_norm(const RacahParams& rp);

}  // namespace cbt

#endif
