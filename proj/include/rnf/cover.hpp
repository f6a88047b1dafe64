#pragma once

// The Farey ball cover of phi's image,
//
//   phi(I) subset of union over q >= Q0, 1 <= p < q, gcd(p, q) = 1 of B(phi(t_{p/q}), C q^{-e}),
//
// together with the partial sums that bound the alpha-dimensional Hausdorff
// pre-measures, and the multifractal formulas.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rnf/compensated.hpp"
#include "rnf/continued_fraction.hpp"
#include "rnf/error.hpp"
#include "rnf/farey.hpp"
#include "rnf/rational.hpp"
#include "rnf/series.hpp"

namespace rnf {

struct CoverBall {
  ComplexPoint center;
  Rational frac;
  double radius = 0.0;
  double exponent = 1.5;
};

/// One ball per irreducible p/q with Q0 <= q <= Qmax. Centres are evaluated on demand,
/// so covers with tens of millions of balls cost nothing until queried.
class CoverBallSet {
 public:
  CoverBallSet(std::int64_t q0, std::int64_t q_max, double c_used, double exponent)
      : q0_(q0), q_max_(q_max), c_used_(c_used), exponent_(exponent) {
    require(q0 >= 2 && q0 <= q_max, ErrorCode::invalid_argument, "need 2 <= Q0 <= Qmax");
    require(std::isfinite(c_used) && c_used > 0, ErrorCode::invalid_argument, "C_used must be > 0");
    require(std::isfinite(exponent) && exponent > 0, ErrorCode::invalid_argument,
            "exponent must be > 0");
  }

  std::int64_t q0() const { return q0_; }
  std::int64_t q_max() const { return q_max_; }
  double c_used() const { return c_used_; }
  double exponent() const { return exponent_; }

  std::uint64_t size() const {
    return farey_count(static_cast<std::uint64_t>(q0_), static_cast<std::uint64_t>(q_max_));
  }

  bool contains_index(std::int64_t p, std::int64_t q) const {
    return q >= q0_ && q <= q_max_ && p >= 1 && p < q && std::gcd(p, q) == 1;
  }

  double radius(std::int64_t q) const {
    return c_used_ * std::pow(static_cast<double>(q), -exponent_);
  }

  /// Centre tolerance used for every ball: radius / 100.
  double center_tolerance(std::int64_t q) const { return radius(q) / 100.0; }

  CoverBall ball(std::int64_t p, std::int64_t q, const SeriesConfig& cfg = {}) const {
    require(contains_index(p, q), ErrorCode::invalid_argument,
            std::to_string(p) + "/" + std::to_string(q) + " is not in the cover");
    const EvalResult c = eval_phi(TimePoint::at_rational(p, q), center_tolerance(q), cfg);
    return {c.value, Rational(p, q), radius(q), exponent_};
  }

  /// Every ball in order of q then p; only sensible for small covers.
  std::vector<CoverBall> materialize(const SeriesConfig& cfg = {}) const {
    std::vector<CoverBall> out;
    for_each_farey(q0_, q_max_, [&](std::int64_t p, std::int64_t q) { out.push_back(ball(p, q, cfg)); });
    return out;
  }

 private:
  std::int64_t q0_;
  std::int64_t q_max_;
  double c_used_;
  double exponent_;
};

inline CoverBallSet build_cover(std::int64_t q0, std::int64_t q_max, double c_used,
                                double exponent = 1.5) {
  return CoverBallSet(q0, q_max, c_used, exponent);
}

struct CoverageEntry {
  double rho = 0.0;
  Rational convergent;
  std::size_t n = 0;
  double h = 0.0;           // rho - p_n/q_n
  double distance = 0.0;    // |phi(t_rho) - phi(t_{p_n/q_n})|
  double error_bound = 0.0;
  double radius = 0.0;
  bool covered = false;
};

struct CoverageReport {
  std::vector<CoverageEntry> entries;
  std::size_t passed = 0;
};

namespace detail {

/// Deep approximation of rho: the last convergent with q beyond 1e30 or the expansion's end.
inline BigRational deep_value(const CFExpansion& cf) {
  const std::size_t limit = std::min<std::size_t>(cf.known_terms(), 400);
  BigInt p_prev2 = 0, q_prev2 = 1, p_prev = 1, q_prev = 0;
  const BigInt big = BigInt(1) << 100;
  for (std::size_t n = 0; n < limit; ++n) {
    const BigInt a = *cf.quotient(n);
    BigInt p = a * p_prev + p_prev2;
    BigInt q = a * q_prev + q_prev2;
    p_prev2 = std::move(p_prev);
    q_prev2 = std::move(q_prev);
    p_prev = std::move(p);
    q_prev = std::move(q);
    if (q_prev > big) break;
  }
  return BigRational(p_prev, q_prev);
}

}  // namespace detail

/// Checks each rho in (0, 1) against the ball of its largest convergent with Q0 <= q_n <= Qmax:
/// covered iff |phi(t_rho) - phi(t_{p_n/q_n})| + error <= radius.
inline CoverageEntry verify_point(const CoverBallSet& cover, const CFExpansion& rho,
                                  const SeriesConfig& cfg = {}) {
  require(rho.a0() == 0, ErrorCode::invalid_argument, "rho must lie in (0, 1)");
  CoverageEntry e;
  if (rho.terminates()) {
    const auto conv = convergents(rho, rho.known_terms());
    const Rational& r = conv.back().frac;
    e.rho = r.to_double();
    e.convergent = r;
    e.n = conv.back().n;
    if (!r.fits_int64() || !cover.contains_index(r.p64(), r.q64())) {
      throw Error(ErrorCode::not_testable, "rational " + r.str() + " is not a cover index");
    }
    e.radius = cover.radius(r.q64());
    e.covered = true;
    return e;
  }
  // a floating expansion stands for its own centre value, generators for their exact limit
  const BigRational value = rho.source() == CFSource::floating
                                ? BigRational(*rho.center())
                                : detail::deep_value(rho);
  e.rho = value.convert_to<double>();
  const std::size_t depth = std::min<std::size_t>(rho.known_terms(), 200);
  const auto conv = convergents(rho, depth);
  std::optional<std::size_t> pick;
  for (std::size_t n = 0; n < conv.size(); ++n) {
    const BigInt& q = conv[n].frac.q();
    if (q > cover.q_max()) break;
    if (q < cover.q0()) continue;
    const double h = BigRational(value - conv[n].frac.exact()).convert_to<double>();
    if (std::fabs(h) / kTwoPi >= cfg.h_floor) pick = n;
  }
  if (!pick) {
    throw Error(ErrorCode::not_testable, "no convergent with Q0 <= q <= Qmax for rho");
  }
  const Convergent& c = conv[*pick];
  e.convergent = c.frac;
  e.n = c.n;
  e.h = BigRational(value - c.frac.exact()).convert_to<double>();
  e.radius = cover.radius(c.frac.q64());
  // radius / 100, or the finest bound the term cap allows; a coarse bound then fails the check
  const double finest = 1.0 / (kPi * kPi * static_cast<double>(cfg.max_terms)) * (1.0 + 1e-9);
  const EvalResult d = phi_delta_abs(TimePoint::at_rational(c.frac.p64(), c.frac.q64()), e.h,
                                     std::max(e.radius / 100.0, finest), cfg);
  e.distance = std::abs(d.value);
  e.error_bound = d.tail_bound;
  e.covered = e.distance + e.error_bound <= e.radius;
  return e;
}

inline CoverageReport verify_cover(const CoverBallSet& cover, const std::vector<CFExpansion>& irrationals,
                                   const SeriesConfig& cfg = {}) {
  CoverageReport rep;
  for (const auto& rho : irrationals) {
    rep.entries.push_back(verify_point(cover, rho, cfg));
    if (rep.entries.back().covered) ++rep.passed;
  }
  return rep;
}

enum class Verdict { convergent, divergent };

inline std::string_view to_string(Verdict v) {
  return v == Verdict::convergent ? "convergent" : "divergent";
}

struct ContentSum {
  double alpha = 0.0;
  std::int64_t q0 = 0;
  std::int64_t q_max = 0;
  double partial = 0.0;     // C^alpha sum q^{1 - 3 alpha / 2}
  double tail_bound = std::numeric_limits<double>::infinity();
  double exact_partial = 0.0;  // C^alpha sum totient(q) q^{-3 alpha / 2}
  Verdict verdict = Verdict::divergent;
};

/// Bound of the alpha pre-measure by the cover with radii C q^{-3/2}, multiplicity
/// per q majorized by q.
inline ContentSum content_partial_sum(double alpha, std::int64_t q0, std::int64_t q_max,
                                      double c_used) {
  require(std::isfinite(alpha) && alpha > 0, ErrorCode::invalid_argument, "alpha must be > 0");
  require(q0 >= 1 && q0 <= q_max, ErrorCode::invalid_argument, "need 1 <= Q0 <= Qmax");
  require(std::isfinite(c_used) && c_used > 0, ErrorCode::invalid_argument, "C_used must be > 0");
  ContentSum cs;
  cs.alpha = alpha;
  cs.q0 = q0;
  cs.q_max = q_max;
  const double s = 1.5 * alpha;
  const double ca = std::pow(c_used, alpha);
  const auto phi = totients_upto(static_cast<std::uint64_t>(q_max));
  CompensatedSum major;
  CompensatedSum exact;
  // ascending q; every term is positive so the order only affects the last bits
  for (std::int64_t q = q0; q <= q_max; ++q) {
    const double qd = static_cast<double>(q);
    const double w = std::pow(qd, -s);
    major.add(qd * w);
    exact.add(static_cast<double>(phi[static_cast<std::size_t>(q)]) * w);
  }
  cs.partial = ca * major.value();
  cs.exact_partial = ca * exact.value();
  if (s > 2.0) cs.tail_bound = ca * std::pow(static_cast<double>(q_max), 2.0 - s) / (s - 2.0);
  cs.verdict = alpha > 4.0 / 3.0 ? Verdict::convergent : Verdict::divergent;
  return cs;
}

/// (4 alpha - 2) / alpha, the dimension bound for phi(D_alpha).
inline double spectrum_bound(double alpha) {
  require(alpha >= 0.5 && alpha <= 0.75, ErrorCode::inadmissible_alpha,
          "alpha must lie in [1/2, 3/4]");
  return (4.0 * alpha - 2.0) / alpha;
}

/// dim D_alpha; nullopt encodes the empty set (dimension -infinity).
inline std::optional<double> jaffard_dim(double alpha) {
  if (alpha >= 0.5 && alpha <= 0.75) return 4.0 * alpha - 2.0;
  if (alpha == 1.5) return 0.0;
  return std::nullopt;
}

struct RefinedCover {
  double gamma = 2.0;
  double radius_exponent = 1.5;
  double convergence_threshold = 4.0 / 3.0;
};

inline RefinedCover refined_cover_exponent(double alpha) {
  require(alpha > 0.5 && alpha <= 0.75, ErrorCode::inadmissible_alpha,
          "alpha must lie in (1/2, 3/4]");
  RefinedCover r;
  r.gamma = 1.0 / (2.0 * alpha - 1.0);
  r.radius_exponent = 0.5 * (r.gamma + 1.0);
  r.convergence_threshold = (4.0 * alpha - 2.0) / alpha;
  return r;
}

}  // namespace rnf
