#pragma once

// Log-domain arithmetic. Transfer sums grow and decay exponentially in the
// iterate count, so every magnitude is carried as a logarithm.

#include <cmath>
#include <limits>
#include <utility>

namespace shiftthermo {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow.
inline double log_add(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// log(exp(a) - exp(b)) for a >= b; returns kLogZero when equal.
inline double log_sub(double a, double b) {
  if (b == kLogZero) return a;
  if (b >= a) return kLogZero;
  return a + std::log1p(-std::exp(b - a));
}

// Running-max log-sum-exp accumulator.
class LogAccumulator {
 public:
  void add(double log_x) {
    if (log_x == kLogZero) return;
    if (log_x > max_) {
      sum_ = sum_ * std::exp(max_ - log_x) + 1.0;
      max_ = log_x;
    } else {
      sum_ += std::exp(log_x - max_);
    }
  }

  double value() const { return max_ == kLogZero ? kLogZero : max_ + std::log(sum_); }
  bool empty() const { return max_ == kLogZero; }

 private:
  double max_ = kLogZero;
  double sum_ = 0.0;
};

// A real number stored as sign and log-magnitude.
struct SignedLog {
  int sign = 0;  // -1, 0, +1
  double log_abs = kLogZero;

  static SignedLog from_double(double v) {
    if (v == 0.0) return {};
    return {v > 0 ? 1 : -1, std::log(std::fabs(v))};
  }
  static SignedLog from_log(double log_v, int sign = 1) {
    if (log_v == kLogZero || sign == 0) return {};
    return {sign, log_v};
  }

  double to_double() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
  bool is_zero() const { return sign == 0; }

  SignedLog operator-() const { return {-sign, log_abs}; }
  SignedLog scaled_log(double log_factor) const {
    return sign == 0 ? SignedLog{} : SignedLog{sign, log_abs + log_factor};
  }

  friend SignedLog operator+(SignedLog a, SignedLog b) {
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    if (a.sign == b.sign) return {a.sign, log_add(a.log_abs, b.log_abs)};
    if (a.log_abs == b.log_abs) return {};
    if (a.log_abs > b.log_abs) return {a.sign, log_sub(a.log_abs, b.log_abs)};
    return {b.sign, log_sub(b.log_abs, a.log_abs)};
  }
  friend SignedLog operator*(SignedLog a, SignedLog b) {
    if (a.sign == 0 || b.sign == 0) return {};
    return {a.sign * b.sign, a.log_abs + b.log_abs};
  }
};

}  // namespace shiftthermo
