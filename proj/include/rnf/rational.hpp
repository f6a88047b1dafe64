#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "rnf/error.hpp"

namespace rnf {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Natural logarithm of a positive big integer, valid far beyond double range.
inline double log_big(const BigInt& v) {
  require(v > 0, ErrorCode::invalid_argument, "log of a non-positive integer");
  const std::size_t bits = boost::multiprecision::msb(v) + 1;
  if (bits <= 1000) return std::log(v.convert_to<double>());
  const std::size_t shift = bits - 64;
  const BigInt top = v >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

/// a / b as a double for positive big integers, accurate when the ratio is representable.
inline double ratio_big(const BigInt& a, const BigInt& b) {
  if (a == 0) return 0.0;
  return std::exp(log_big(a) - log_big(b));
}

/// Nearest integer to exp(ln_value); exact only while the result fits a double mantissa.
inline BigInt big_from_log(double ln_value) {
  if (ln_value < 700.0) {
    const double v = std::nearbyint(std::exp(ln_value));
    return BigInt(v < 1.0 ? 1.0 : v);
  }
  const double log2v = ln_value / std::log(2.0);
  const auto shift = static_cast<unsigned>(std::floor(log2v)) - 52u;
  const double mant = std::exp2(log2v - static_cast<double>(shift));
  return BigInt(std::nearbyint(mant)) << shift;
}

/// Irreducible fraction p/q with q >= 1.
class Rational {
 public:
  Rational() : p_(0), q_(1) {}

  Rational(BigInt p, BigInt q) : p_(std::move(p)), q_(std::move(q)) {
    require(q_ != 0, ErrorCode::zero_denominator, "zero denominator");
    if (q_ < 0) {
      p_ = -p_;
      q_ = -q_;
    }
    const BigInt g = boost::multiprecision::gcd(p_, q_);
    if (g > 1) {
      p_ /= g;
      q_ /= g;
    }
  }

  explicit Rational(const BigRational& r)
      : Rational(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r)) {}

  const BigInt& p() const { return p_; }
  const BigInt& q() const { return q_; }
  int mod4() const { return static_cast<int>(q_ % 4); }

  BigRational exact() const { return BigRational(p_, q_); }

  double to_double() const { return exact().convert_to<double>(); }

  bool fits_int64() const {
    return boost::multiprecision::abs(p_) <= std::numeric_limits<std::int64_t>::max() &&
           q_ <= std::numeric_limits<std::int64_t>::max();
  }
  std::int64_t p64() const { return p_.convert_to<std::int64_t>(); }
  std::int64_t q64() const { return q_.convert_to<std::int64_t>(); }

  std::string str() const { return p_.str() + "/" + q_.str(); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.p_ == b.p_ && a.q_ == b.q_; }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  BigInt p_;
  BigInt q_;
};

inline Rational make_rational(const BigInt& p, const BigInt& q) { return Rational(p, q); }

}  // namespace rnf
