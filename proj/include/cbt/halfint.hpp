#ifndef CBT_HALFINT_HPP
#define CBT_HALFINT_HPP

// Nonnegative half-integers stored as twice their value, so parity questions
// (is a+b+c an integer?) become exact integer arithmetic.

#include <stdexcept>
#include <string>

#include "cbt/rational.hpp"

namespace cbt {

class HalfInt {
 public:
  HalfInt() : tw_(0) {}
  explicit HalfInt(long j) : HalfInt(from_twice(2 * j)) {}

  static HalfInt from_twice(long two_j) {
    if (two_j < 0) throw std::domain_error("half-integer must be nonnegative, got 2j = " + std::to_string(two_j));
    HalfInt h;
    h.tw_ = two_j;
    return h;
  }

  long twice() const { return tw_; }
  bool is_integer() const { return tw_ % 2 == 0; }
  double value() const { return 0.5 * static_cast<double>(tw_); }
  Rational as_rational() const { return Rational(tw_, 2); }

  friend bool operator==(HalfInt a, HalfInt b) { return a.tw_ == b.tw_; }
  friend bool operator!=(HalfInt a, HalfInt b) { return a.tw_ != b.tw_; }
  friend bool operator<(HalfInt a, HalfInt b) { return a.tw_ < b.tw_; }
  friend bool operator<=(HalfInt a, HalfInt b) { return a.tw_ <= b.tw_; }
  friend HalfInt operator+(HalfInt a, HalfInt b) { return from_twice(a.tw_ + b.tw_); }

 private:
  long tw_;
};

}  // namespace cbt

#endif
