#pragma once

#include <cmath>
#include <complex>
#include <span>

namespace rnf {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> v) {
    re_.add(v.real());
    im_.add(v.imag());
  }

  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

/// Ordered compensated sum of a sequence; the order fixes the result bit-for-bit.
inline std::complex<double> ordered_sum(std::span<const std::complex<double>> parts) {
  CompensatedComplexSum acc;
  for (const auto& p : parts) acc.add(p);
  return acc.value();
}

inline double ordered_sum(std::span<const double> parts) {
  CompensatedSum acc;
  for (double p : parts) acc.add(p);
  return acc.value();
}

}  // namespace rnf
