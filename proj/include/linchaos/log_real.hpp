#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace linchaos {

// Signed scalar stored as a sign and the natural log of its magnitude.
// Orbit norms in block constructions reach magnitudes around e^{1e5},
// far outside double range, so all coefficient/norm arithmetic lives in
// this representation. Zero is sign 0 with log magnitude -inf.
//
// Subtraction uses a cancellation window: when the log-sum-exp of two
// opposite-signed operands lands more than `cancel_window` natural-log
// units below the larger operand, the result is treated as exact zero.
// The default window of 40 (~e-18 relative) sits below double precision,
// so only true cancellations trigger it.
class LogReal {
 public:
  static constexpr double kDefaultCancelWindow = 40.0;

  LogReal() : log_(-std::numeric_limits<double>::infinity()), sign_(0) {}

  static LogReal from_linear(double x) {
    LogReal r;
    if (x > 0) {
      r.sign_ = 1;
      r.log_ = std::log(x);
    } else if (x < 0) {
      r.sign_ = -1;
      r.log_ = std::log(-x);
    }
    return r;
  }

  static LogReal from_log(int sign, double log_mag) {
    LogReal r;
    if (sign == 0 || log_mag == -std::numeric_limits<double>::infinity()) {
      return r;
    }
    if (std::isnan(log_mag)) throw std::invalid_argument("LogReal: nan log magnitude");
    r.sign_ = sign > 0 ? 1 : -1;
    r.log_ = log_mag;
    return r;
  }

  // exp(log_mag), always positive.
  static LogReal exp_of(double log_mag) { return from_log(1, log_mag); }

  static LogReal zero() { return LogReal(); }
  static LogReal one() { return from_log(1, 0.0); }

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  bool is_positive() const { return sign_ > 0; }

  // Natural-log magnitude; -inf for zero.
  double log_mag() const { return log_; }

  // Linear value; overflows to +-inf outside double range.
  double linear() const { return sign_ == 0 ? 0.0 : sign_ * std::exp(log_); }

  LogReal operator-() const { return from_log(-sign_, log_); }

  LogReal abs() const { return sign_ == 0 ? zero() : from_log(1, log_); }

  LogReal operator*(const LogReal& o) const {
    if (sign_ == 0 || o.sign_ == 0) return zero();
    return from_log(sign_ * o.sign_, log_ + o.log_);
  }

  LogReal operator/(const LogReal& o) const {
    if (o.sign_ == 0) throw std::domain_error("LogReal: division by zero");
    if (sign_ == 0) return zero();
    return from_log(sign_ * o.sign_, log_ - o.log_);
  }

  // |x|^e for nonnegative x (or any x with integer-valued e applied to |x|).
  LogReal pow(double e) const {
    if (sign_ == 0) {
      if (e <= 0) throw std::domain_error("LogReal: 0^e with e <= 0");
      return zero();
    }
    if (sign_ < 0) throw std::domain_error("LogReal: pow of negative base");
    return from_log(1, log_ * e);
  }

  LogReal add(const LogReal& o, double cancel_window = kDefaultCancelWindow) const {
    if (sign_ == 0) return o;
    if (o.sign_ == 0) return *this;
    double hi = std::max(log_, o.log_);
    double lo = std::min(log_, o.log_);
    if (sign_ == o.sign_) {
      return from_log(sign_, hi + std::log1p(std::exp(lo - hi)));
    }
    // Opposite signs: result carries the sign of the larger magnitude.
    if (log_ == o.log_) return zero();
    double res = hi + std::log1p(-std::exp(lo - hi));
    if (res < hi - cancel_window) return zero();
    int s = (log_ > o.log_) ? sign_ : o.sign_;
    return from_log(s, res);
  }

  LogReal operator+(const LogReal& o) const { return add(o); }
  LogReal operator-(const LogReal& o) const { return add(-o); }

  // Signed comparison.
  bool operator<(const LogReal& o) const {
    if (sign_ != o.sign_) return sign_ < o.sign_;
    if (sign_ == 0) return false;
    if (sign_ > 0) return log_ < o.log_;
    return log_ > o.log_;
  }
  bool operator>(const LogReal& o) const { return o < *this; }
  bool operator<=(const LogReal& o) const { return !(o < *this); }
  bool operator>=(const LogReal& o) const { return !(*this < o); }
  bool operator==(const LogReal& o) const { return sign_ == o.sign_ && log_ == o.log_; }
  bool operator!=(const LogReal& o) const { return !(*this == o); }

  bool close_to(const LogReal& o, double log_tol) const {
    if (sign_ != o.sign_) return false;
    if (sign_ == 0) return true;
    return std::abs(log_ - o.log_) <= log_tol;
  }

 private:
  double log_;
  int8_t sign_;
};

inline LogReal abs(const LogReal& x) { return x.abs(); }

inline LogReal max(const LogReal& a, const LogReal& b) { return a < b ? b : a; }
inline LogReal min(const LogReal& a, const LogReal& b) { return a < b ? a : b; }

}  // namespace linchaos
