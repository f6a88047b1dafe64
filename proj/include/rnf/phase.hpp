#pragma once

// Exact reduction of quadratic phases k^2 * c modulo 1.
//
// The summands of every series in this library are exp(2 pi i k^2 c) for a
// fixed "turns per k^2" parameter c. Computing k^2 * c in floating point and
// then reducing loses all accuracy once k^2 * c exceeds 2^53, so c is kept
// either as an exact rational p/q or as a dyadic number M * 2^E with a 64-bit
// integer mantissa, and the fractional part of k^2 * c is formed with 128-bit
// integer arithmetic.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include "rnf/error.hpp"

namespace rnf {

using ComplexPoint = std::complex<double>;
using u128 = unsigned __int128;

class QuadraticPhase {
 public:
  /// Phase parameter given as an extended-precision real number.
  static QuadraticPhase dyadic(long double c) {
    require(std::isfinite(c), ErrorCode::invalid_argument, "phase parameter must be finite");
    QuadraticPhase ph;
    ph.kind_ = Kind::dyadic;
    ph.negative_ = c < 0;
    long double a = std::fabs(c);
    if (a == 0) {
      ph.mantissa_ = 0;
      ph.exponent_ = 0;
      return ph;
    }
    int e = 0;
    long double m = std::frexp(a, &e);  // a = m * 2^e, m in [0.5, 1)
    ph.mantissa_ = static_cast<std::uint64_t>(std::ldexp(m, 64));
    ph.exponent_ = e - 64;
    // strip trailing zero bits so integer / half-integer detection is exact
    while (ph.mantissa_ != 0 && (ph.mantissa_ & 1u) == 0) {
      ph.mantissa_ >>= 1;
      ++ph.exponent_;
    }
    return ph;
  }

  /// Phase parameter p/q, q >= 1, reduced modulo 1 internally.
  static QuadraticPhase rational(std::int64_t p, std::int64_t q) {
    require(q > 0, ErrorCode::zero_denominator, "phase denominator must be positive");
    QuadraticPhase ph;
    ph.kind_ = Kind::rational;
    std::int64_t r = p % q;
    if (r < 0) r += q;
    ph.num_ = static_cast<std::uint64_t>(r);
    ph.den_ = static_cast<std::uint64_t>(q);
    return ph;
  }

  /// m * c modulo 1, as a representative in [-1/2, 1/2), for 0 <= m < 2^62.
  double turns_linear(std::uint64_t m) const { return centered(static_cast<u128>(m)); }

  /// k^2 * c modulo 1, as a representative in [-1/2, 1/2), for k <= 2^31.
  double turns_square(std::uint64_t k) const {
    if (kind_ == Kind::rational) {
      const std::uint64_t kr = k % den_;
      return centered(static_cast<u128>(kr) * kr % den_);
    }
    return centered(static_cast<u128>(k) * k);
  }

  /// True when every k^2 c is an integer, i.e. c is an integer.
  bool is_integer() const {
    if (kind_ == Kind::rational) return num_ == 0;
    return mantissa_ == 0 || exponent_ >= 0;
  }

  /// True when c is an odd multiple of 1/2, so exp(2 pi i k^2 c) = (-1)^k.
  bool is_half_integer() const {
    if (kind_ == Kind::rational) return 2 * num_ == den_;
    return mantissa_ != 0 && exponent_ == -1;
  }

  bool is_rational() const { return kind_ == Kind::rational; }

 private:
  enum class Kind { dyadic, rational };

  // Fractional part of m * |c| in [0, 1), exact up to the final rounding.
  long double frac_abs(u128 m) const {
    if (kind_ == Kind::rational) {
      const u128 r = (m % den_) * num_ % den_;
      return static_cast<long double>(static_cast<std::uint64_t>(r)) /
             static_cast<long double>(den_);
    }
    if (mantissa_ == 0 || exponent_ >= 0) return 0.0L;
    const int shift = -exponent_;
    // m < 2^62 and mantissa < 2^64 keep the product below 2^126
    const u128 prod = m * mantissa_;
    if (shift >= 127) return std::ldexp(static_cast<long double>(prod), exponent_);
    const u128 mask = (static_cast<u128>(1) << shift) - 1;
    return std::ldexp(static_cast<long double>(prod & mask), exponent_);
  }

  double centered(u128 m) const {
    long double f = frac_abs(m);
    if (negative_) f = -f;
    if (f >= 0.5L) f -= 1.0L;
    if (f < -0.5L) f += 1.0L;
    return static_cast<double>(f);
  }

  Kind kind_ = Kind::dyadic;
  bool negative_ = false;
  std::uint64_t mantissa_ = 0;
  int exponent_ = 0;
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

/// exp(2 pi i f) for f given in turns, |f| <= 1/2.
inline ComplexPoint cis_turns(double f) {
  const double a = 2.0 * std::numbers::pi * f;
  return {std::cos(a), std::sin(a)};
}

/// exp(2 pi i f) - 1 without cancellation for small f.
inline ComplexPoint cis_turns_minus_one(double f) {
  const double a = 2.0 * std::numbers::pi * f;
  const double s = std::sin(0.5 * a);
  return {-2.0 * s * s, std::sin(a)};
}

}  // namespace rnf
