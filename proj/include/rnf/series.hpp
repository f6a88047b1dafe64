#pragma once

// Truncated evaluation of Riemann's function R, Duistermaat's phi_D and the
// complex trajectory
//
//   phi(t) = sum_{k in Z} (exp(-4 pi^2 i k^2 t) - 1) / (-4 pi^2 k^2),
//
// with certified truncation bounds. The k = 0 summand of phi is taken to be
// its limit i t, and the k, -k summands are paired, so
//
//   phi(t) = i t + sum_{k >= 1} (1 - exp(-2 pi i k^2 x)) / (2 pi^2 k^2),  x = 2 pi t.
//
// Every paired summand is bounded by 1 / (pi^2 k^2), so truncating after N
// terms leaves at most 1 / (pi^2 N).

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <utility>

#include "rnf/detail/quadratic_sums.hpp"
#include "rnf/error.hpp"
#include "rnf/phase.hpp"

namespace rnf {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct SeriesConfig {
  std::uint64_t max_terms = 1'000'000'000;
  /// Smallest |h| (in t units) accepted by phi_delta.
  double h_floor = 1e-10;
};

struct EvalResult {
  ComplexPoint value;
  std::uint64_t truncation_N = 1;
  double tail_bound = 0.0;
};

struct RealEvalResult {
  double value = 0.0;
  std::uint64_t truncation_N = 1;
  double tail_bound = 0.0;
};

/// A time t, optionally tagged with the exact rational x = 2 pi t = p/q.
class TimePoint {
 public:
  static TimePoint from_t(double t) {
    require(std::isfinite(t), ErrorCode::invalid_argument, "t must be finite");
    TimePoint tp;
    tp.x_ = kTwoPi * t;
    tp.t_ = t;
    return tp;
  }

  /// t = x / (2 pi) with x used exactly in every phase.
  static TimePoint from_x(double x) {
    require(std::isfinite(x), ErrorCode::invalid_argument, "x must be finite");
    TimePoint tp;
    tp.x_ = x;
    tp.t_ = x / kTwoPi;
    return tp;
  }

  /// t_{p/q} = (p/q) / (2 pi); the fraction is reduced.
  static TimePoint at_rational(std::int64_t p, std::int64_t q) {
    require(q != 0, ErrorCode::zero_denominator, "q must be nonzero");
    if (q < 0) {
      p = -p;
      q = -q;
    }
    const std::int64_t g = std::gcd(p < 0 ? -p : p, q);
    TimePoint tp;
    tp.tag_ = std::pair{p / g, q / g};
    tp.x_ = static_cast<double>(static_cast<long double>(p / g) / static_cast<long double>(q / g));
    tp.t_ = tp.x_ / kTwoPi;
    return tp;
  }

  double t() const { return t_; }
  double x() const { return x_; }
  bool tagged() const { return tag_.has_value(); }
  std::int64_t p() const { return tag_ ? tag_->first : 0; }
  std::int64_t q() const { return tag_ ? tag_->second : 0; }

  /// Turns per k^2 of the phi summands: exp(2 pi i k^2 c) with c = -x.
  QuadraticPhase phi_phase() const {
    if (tag_) return QuadraticPhase::rational(-tag_->first, tag_->second);
    return QuadraticPhase::dyadic(-static_cast<long double>(x_));
  }

 private:
  double t_ = 0.0;
  double x_ = 0.0;
  std::optional<std::pair<std::int64_t, std::int64_t>> tag_;
};

namespace detail {

inline void require_tolerance(double tol) {
  require(std::isfinite(tol) && tol > 0.0, ErrorCode::invalid_argument,
          "tolerance must be positive and finite");
}

/// Smallest N with bound_scale / N <= tol, or an infeasibility error past the cap.
inline std::uint64_t terms_for(double bound_scale, double tol, const SeriesConfig& cfg) {
  const double n = std::ceil(bound_scale / tol);
  if (!(n <= static_cast<double>(cfg.max_terms))) {
    throw Error(ErrorCode::tolerance_infeasible,
                "tolerance " + std::to_string(tol) + " needs more than " +
                    std::to_string(cfg.max_terms) + " terms");
  }
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
}

}  // namespace detail

/// R(x) = sum sin(n^2 x) / n^2 with sum_{n > N} 1/n^2 < 1/N <= tol.
inline RealEvalResult eval_R(double x, double tol, const SeriesConfig& cfg = {}) {
  detail::require_tolerance(tol);
  require(std::isfinite(x), ErrorCode::invalid_argument, "x must be finite");
  const long double c = static_cast<long double>(x) / (2.0L * std::numbers::pi_v<long double>);
  const QuadraticPhase ph = QuadraticPhase::dyadic(c);
  if (ph.is_integer() || ph.is_half_integer()) return {0.0, 1, 0.0};
  const std::uint64_t n = detail::terms_for(1.0, tol, cfg);
  const auto sums = detail::quadratic_sum(ph, n);
  return {sums.oscillatory.imag(), n, 1.0 / static_cast<double>(n)};
}

/// phi_D(t) = sum exp(i pi n^2 t) / (i pi n^2), tail below 1 / (pi N).
inline EvalResult eval_phi_D(double t, double tol, const SeriesConfig& cfg = {}) {
  detail::require_tolerance(tol);
  require(std::isfinite(t), ErrorCode::invalid_argument, "t must be finite");
  const QuadraticPhase ph = QuadraticPhase::dyadic(static_cast<long double>(t) / 2.0L);
  const ComplexPoint minus_i_over_pi{0.0, -1.0 / kPi};
  // sum 1/n^2 = pi^2/6, sum (-1)^n/n^2 = -pi^2/12
  if (ph.is_integer()) return {{0.0, -kPi / 6.0}, 1, 0.0};
  if (ph.is_half_integer()) return {{0.0, kPi / 12.0}, 1, 0.0};
  const std::uint64_t n = detail::terms_for(1.0 / kPi, tol, cfg);
  const auto sums = detail::quadratic_sum(ph, n);
  return {minus_i_over_pi * sums.oscillatory, n, 1.0 / (kPi * static_cast<double>(n))};
}

/// phi(t) with the paired series truncated at N = ceil(1 / (pi^2 tol)).
inline EvalResult eval_phi(const TimePoint& tp, double tol, const SeriesConfig& cfg = {}) {
  detail::require_tolerance(tol);
  const QuadraticPhase ph = tp.phi_phase();
  const ComplexPoint it{0.0, tp.t()};
  // x integer: every summand vanishes; x half-integer: summands (1 - (-1)^k) / (2 pi^2 k^2)
  if (ph.is_integer()) return {it, 1, 0.0};
  if (ph.is_half_integer()) return {it + 0.125, 1, 0.0};
  const std::uint64_t n = detail::terms_for(1.0 / (kPi * kPi), tol, cfg);
  const auto sums = detail::quadratic_sum(ph, n);
  const ComplexPoint series = (sums.basel - sums.oscillatory) / (2.0 * kPi * kPi);
  return {it + series, n, 1.0 / (kPi * kPi * static_cast<double>(n))};
}

inline EvalResult eval_phi(double t, double tol, const SeriesConfig& cfg = {}) {
  return eval_phi(TimePoint::from_t(t), tol, cfg);
}

/// phi(t0 + hx / 2 pi) - phi(t0) summed term by term, with absolute tail bound <= abs_tol.
inline EvalResult phi_delta_abs(const TimePoint& t0, double hx, double abs_tol,
                                const SeriesConfig& cfg = {}) {
  detail::require_tolerance(abs_tol);
  require(std::isfinite(hx), ErrorCode::invalid_argument, "h must be finite");
  if (hx == 0.0) return {{0.0, 0.0}, 1, 0.0};
  require(std::fabs(hx) / kTwoPi >= cfg.h_floor, ErrorCode::resolution_floor,
          "|h| below the phi_delta floor");
  const std::uint64_t n = detail::terms_for(1.0 / (kPi * kPi), abs_tol, cfg);
  const QuadraticPhase step = QuadraticPhase::dyadic(-static_cast<long double>(hx));
  const ComplexPoint d = detail::delta_sum(t0.phi_phase(), step, n);
  const ComplexPoint value = ComplexPoint{0.0, hx / kTwoPi} - d / (2.0 * kPi * kPi);
  return {value, n, 1.0 / (kPi * kPi * static_cast<double>(n))};
}

/// Same as phi_delta with the offset given in x units (hx = 2 pi h).
inline EvalResult phi_delta_x(const TimePoint& t0, double hx, double rel_tol,
                              const SeriesConfig& cfg = {}) {
  detail::require_tolerance(rel_tol);
  if (hx == 0.0) return {{0.0, 0.0}, 1, 0.0};
  require(std::isfinite(hx), ErrorCode::invalid_argument, "h must be finite");
  require(std::fabs(hx) / kTwoPi >= cfg.h_floor, ErrorCode::resolution_floor,
          "|h| below the phi_delta floor");
  return phi_delta_abs(t0, hx, rel_tol * std::sqrt(std::fabs(hx) / kTwoPi), cfg);
}

/// phi(t0 + h) - phi(t0) with tail bound <= rel_tol * sqrt(|h|).
inline EvalResult phi_delta(const TimePoint& t0, double h, double rel_tol,
                            const SeriesConfig& cfg = {}) {
  return phi_delta_x(t0, kTwoPi * h, rel_tol, cfg);
}

struct ReducedTime {
  double x = 0.0;
  std::int64_t winding = 0;
};

/// Splits t = (x + winding) / (2 pi) with x in [0, 1).
inline ReducedTime reduce_time(double t) {
  require(std::isfinite(t), ErrorCode::invalid_argument, "t must be finite");
  const double x = kTwoPi * t;
  const double w = std::floor(x);
  return {x - w, static_cast<std::int64_t>(w)};
}

}  // namespace rnf
