#pragma once

// Chord directions of phi near a point x0 (in x = 2 pi t units).
//
// Offsets h are given in x units throughout; a chord is
//   phi(t_{x0} + h / (2 pi)) - phi(t_{x0}),
// evaluated term by term so that no large values cancel.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "rnf/angles.hpp"
#include "rnf/continued_fraction.hpp"
#include "rnf/error.hpp"
#include "rnf/farey.hpp"
#include "rnf/rational.hpp"
#include "rnf/series.hpp"

namespace rnf {

enum class Side { right, left, both };

inline std::string_view to_string(Side s) {
  switch (s) {
    case Side::right: return "right";
    case Side::left: return "left";
    case Side::both: return "both";
  }
  return "unknown";
}

/// h_n = h0 * ratio^n, n < count, on the requested side(s).
struct HSchedule {
  double h0 = 1e-2;
  double ratio = 0.5;
  std::size_t count = 10;
  Side side = Side::right;

  /// Geometric schedule from h_max down to (at least) h_min.
  static HSchedule spanning(double h_max, double h_min, double ratio, Side side = Side::right) {
    require(h_max >= h_min && h_min > 0.0, ErrorCode::invalid_argument, "need 0 < h_min <= h_max");
    require(ratio > 0.0 && ratio < 1.0, ErrorCode::invalid_argument, "ratio must lie in (0, 1)");
    const double steps = std::log(h_min / h_max) / std::log(ratio);
    return {h_max, ratio, static_cast<std::size_t>(std::floor(steps + 1e-9)) + 1, side};
  }

  void validate(const SeriesConfig& cfg = {}) const {
    require(std::isfinite(h0) && h0 > 0.0, ErrorCode::invalid_argument, "h0 must be positive");
    require(ratio > 0.0 && ratio < 1.0, ErrorCode::invalid_argument, "ratio must lie in (0, 1)");
    require(count >= 1, ErrorCode::invalid_argument, "count must be >= 1");
    require(smallest() / kTwoPi >= cfg.h_floor, ErrorCode::resolution_floor,
            "schedule reaches below the phi_delta floor");
  }

  double smallest() const { return h0 * std::pow(ratio, static_cast<double>(count - 1)); }

  /// Magnitudes h_0 > h_1 > ...
  std::vector<double> magnitudes() const {
    std::vector<double> out(count);
    for (std::size_t n = 0; n < count; ++n) out[n] = h0 * std::pow(ratio, static_cast<double>(n));
    return out;
  }

  /// Signed offsets: right side (positive) first, then left side.
  std::vector<double> offsets() const {
    std::vector<double> out;
    const auto mags = magnitudes();
    if (side != Side::left) out.insert(out.end(), mags.begin(), mags.end());
    if (side != Side::right) {
      for (double h : mags) out.push_back(-h);
    }
    return out;
  }
};

/// A chord with its certified error bound.
struct Chord {
  ComplexPoint delta;
  double error_bound = 0.0;
};

/// Chord at x0 certified to resolve its own direction: |delta| > 10 * error bound.
/// The tolerance is tightened from the current magnitude estimate; once that
/// needs more terms than the cap allows the chord is reported as unresolvable.
inline Chord certified_chord(const TimePoint& x0, double hx, double rel_tol,
                             const SeriesConfig& cfg = {}) {
  require(hx != 0.0, ErrorCode::invalid_argument, "h must be nonzero");
  const double tightest = 1.0 / (kPi * kPi * static_cast<double>(cfg.max_terms));
  EvalResult r = phi_delta_x(x0, hx, rel_tol, cfg);
  while (true) {
    const double mag = std::abs(r.value);
    if (mag > 10.0 * r.tail_bound) return {r.value, r.tail_bound};
    // |delta| <= mag + tail, so even the finest bound may be too coarse
    if (mag + r.tail_bound <= 10.0 * tightest || r.tail_bound <= tightest * (1.0 + 1e-9)) break;
    const double target = mag > r.tail_bound ? (mag - r.tail_bound) / 12.0 : r.tail_bound / 8.0;
    r = phi_delta_abs(x0, hx, std::max(target, tightest), cfg);
  }
  throw Error(ErrorCode::unresolvable_chord,
              "|delta| not resolved above its error bound at h = " + std::to_string(hx));
}

/// Unit chord direction at x0 for an offset h in x units.
inline ComplexPoint chord_direction(const TimePoint& x0, double hx, double rel_tol = 1e-3,
                                    const SeriesConfig& cfg = {}) {
  const Chord c = certified_chord(x0, hx, rel_tol, cfg);
  return c.delta / std::abs(c.delta);
}

struct DirectionSample {
  double h = 0.0;  // signed, x units
  ComplexPoint dir;
  double magnitude = 0.0;
  double error_bound = 0.0;
};

struct DirectionProfile {
  std::vector<DirectionSample> samples;
  std::optional<ComplexPoint> limit_estimate;
  double dispersion = 0.0;
  std::vector<double> unresolved;  // offsets whose chord could not be resolved
};

inline constexpr double kLimitDispersion = 0.02;

/// Tail window: the last quarter of the samples, at least two.
inline std::size_t tail_window_size(std::size_t n) {
  return std::min(n, std::max<std::size_t>(2, (n + 3) / 4));
}

inline void summarize_profile(DirectionProfile& prof) {
  const std::size_t n = prof.samples.size();
  prof.limit_estimate.reset();
  prof.dispersion = 0.0;
  if (n == 0) return;
  const std::size_t w = tail_window_size(n);
  std::vector<ComplexPoint> tail;
  for (std::size_t i = n - w; i < n; ++i) tail.push_back(prof.samples[i].dir);
  prof.dispersion = max_pairwise_distance(tail);
  if (n >= 2 && prof.dispersion < kLimitDispersion) prof.limit_estimate = prof.samples.back().dir;
}

/// Profile over the given signed offsets using an arbitrary chord source
/// (returning a Chord or throwing unresolvable_chord). With stop_after > 0, once
/// that many consecutive offsets of one sign are unresolvable the remaining
/// offsets of that sign are recorded as unresolved without being evaluated.
template <class ChordSource>
DirectionProfile profile_from(const std::vector<double>& offsets, ChordSource&& chord,
                              std::size_t stop_after = 0) {
  std::vector<std::optional<Chord>> got(offsets.size());
  std::size_t misses_pos = 0;
  std::size_t misses_neg = 0;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    std::size_t& misses = offsets[i] > 0 ? misses_pos : misses_neg;
    if (stop_after > 0 && misses >= stop_after) continue;
    try {
      got[i] = chord(offsets[i]);
      misses = 0;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::unresolvable_chord) throw;
      ++misses;
    }
  }
  DirectionProfile prof;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    if (!got[i]) {
      prof.unresolved.push_back(offsets[i]);
      continue;
    }
    const double mag = std::abs(got[i]->delta);
    prof.samples.push_back({offsets[i], got[i]->delta / mag, mag, got[i]->error_bound});
  }
  summarize_profile(prof);
  return prof;
}

inline DirectionProfile direction_profile(const TimePoint& x0, const std::vector<double>& offsets,
                                          double rel_tol = 1e-3, const SeriesConfig& cfg = {},
                                          std::size_t stop_after = 0) {
  return profile_from(
      offsets, [&](double h) { return certified_chord(x0, h, rel_tol, cfg); }, stop_after);
}

struct CornerReport {
  DirectionProfile right;
  DirectionProfile left;
  ComplexPoint ratio_right_over_left;
  double ratio_distance_to_i = 0.0;
  double nearest_eighth_root_distance = 0.0;
  ComplexPoint e_pq_estimate;
  bool limits_found = false;
};

namespace detail {

inline TimePoint rational_point(const Rational& pq) {
  require(pq.fits_int64(), ErrorCode::invalid_argument, "rational point must fit 64-bit integers");
  return TimePoint::at_rational(pq.p64(), pq.q64());
}

inline void require_lemma_range(const HSchedule& sched, const Rational& pq) {
  const double q = pq.q().convert_to<double>();
  require(sched.h0 <= 1.0 / (q * q), ErrorCode::invalid_argument,
          "schedule must satisfy h <= 1/q^2");
}

}  // namespace detail

/// One-sided chord limits at a rational with q = 0, 1, 3 (mod 4).
inline CornerReport corner_check(const Rational& pq, const HSchedule& sched, double rel_tol = 1e-3,
                                 const SeriesConfig& cfg = {}) {
  if (pq.mod4() == 2) throw Error(ErrorCode::use_spiral_profile, "q = 2 (mod 4)");
  sched.validate(cfg);
  detail::require_lemma_range(sched, pq);
  const TimePoint x0 = detail::rational_point(pq);
  const auto mags = sched.magnitudes();
  std::vector<double> neg(mags.size());
  std::transform(mags.begin(), mags.end(), neg.begin(), [](double h) { return -h; });

  CornerReport rep;
  rep.right = direction_profile(x0, mags, rel_tol, cfg);
  rep.left = direction_profile(x0, neg, rel_tol, cfg);
  if (rep.right.samples.empty() || rep.left.samples.empty()) {
    throw Error(ErrorCode::unresolvable_chord, "no resolvable chord on one side");
  }
  const ComplexPoint r = rep.right.limit_estimate.value_or(rep.right.samples.back().dir);
  const ComplexPoint l = rep.left.limit_estimate.value_or(rep.left.samples.back().dir);
  rep.limits_found = rep.right.limit_estimate && rep.left.limit_estimate;
  rep.ratio_right_over_left = r / l;
  rep.ratio_distance_to_i = angular_distance(rep.ratio_right_over_left, {0.0, 1.0});
  rep.nearest_eighth_root_distance = eighth_root_distance(r);
  rep.e_pq_estimate = r * unit_at(-std::numbers::pi / 4.0);
  return rep;
}

struct SpiralReport {
  DirectionProfile profile;
  double winding_total = 0.0;
  double direction_gaps = 0.0;
  bool dense = false;
  /// |delta| / |h| per resolved sample of each side, in schedule order.
  std::vector<double> slope_right;
  std::vector<double> slope_left;
};

inline constexpr double kDefaultGapThreshold = 10.0 * std::numbers::pi / 180.0;

/// Accumulated |change of argument| between consecutive directions.
inline double accumulated_winding(const std::vector<DirectionSample>& samples) {
  double w = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    w += angular_distance(samples[i - 1].dir, samples[i].dir);
  }
  return w;
}

/// Winding of chord directions at a rational with q = 2 (mod 4).
/// Each side is traversed separately; winding is summed over the sides. Below the
/// scale where chords stop resolving, |delta| ~ h^{3/2} only shrinks further, so the
/// scan of a side stops after `stop_after` consecutive unresolvable offsets.
inline constexpr std::size_t kSpiralStopAfter = 3;

inline SpiralReport spiral_profile(const Rational& pq, const HSchedule& sched,
                                   double rel_tol = 1e-3,
                                   double gap_threshold = kDefaultGapThreshold,
                                   const SeriesConfig& cfg = {},
                                   std::size_t stop_after = kSpiralStopAfter) {
  if (pq.mod4() != 2) throw Error(ErrorCode::use_corner_check, "q is not 2 (mod 4)");
  sched.validate(cfg);
  detail::require_lemma_range(sched, pq);
  const TimePoint x0 = detail::rational_point(pq);
  SpiralReport rep;
  rep.profile = direction_profile(x0, sched.offsets(), rel_tol, cfg, stop_after);
  std::vector<DirectionSample> right;
  std::vector<DirectionSample> left;
  std::vector<ComplexPoint> dirs;
  for (const auto& s : rep.profile.samples) {
    (s.h > 0 ? right : left).push_back(s);
    dirs.push_back(s.dir);
    (s.h > 0 ? rep.slope_right : rep.slope_left).push_back(s.magnitude / std::fabs(s.h));
  }
  rep.winding_total = accumulated_winding(right) + accumulated_winding(left);
  rep.direction_gaps = max_circular_gap(dirs);
  rep.dense = rep.direction_gaps < gap_threshold;
  return rep;
}

/// True when the maxima over consecutive windows of `window` values strictly decrease.
inline bool window_envelope_decreasing(const std::vector<double>& v, std::size_t window) {
  require(window >= 1, ErrorCode::invalid_argument, "window must be >= 1");
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b + window <= v.size(); b += window) {
    const double m = *std::max_element(v.begin() + static_cast<std::ptrdiff_t>(b),
                                       v.begin() + static_cast<std::ptrdiff_t>(b + window));
    if (!(m < prev)) return false;
    prev = m;
  }
  return true;
}

struct ClusterReport {
  DirectionProfile profile;
  double angular_spread = 0.0;  // radians
  std::string verdict;          // "no single tangent", "consistent with a tangent", "inconclusive"
};

inline constexpr double kClusterNeighborhood = 5.0 * std::numbers::pi / 180.0;
inline constexpr double kDefaultSpreadThreshold = 30.0 * std::numbers::pi / 180.0;

/// Spread of a set of chord directions taken as lines (d and -d identified):
/// the arc measure of the union of closed 5 degree neighbourhoods, less the
/// 10 degrees a single line occupies.
inline double line_spread(const std::vector<ComplexPoint>& dirs) {
  if (dirs.empty()) return 0.0;
  std::vector<ComplexPoint> doubled;
  doubled.reserve(dirs.size());
  for (const auto& d : dirs) doubled.push_back(d * d);
  const double arc = 0.5 * covered_arc(doubled, 2.0 * kClusterNeighborhood);
  return std::max(0.0, arc - 2.0 * kClusterNeighborhood);
}

template <class ChordSource>
ClusterReport cluster_from(const std::vector<double>& offsets, ChordSource&& chord,
                           double spread_threshold = kDefaultSpreadThreshold) {
  ClusterReport rep;
  rep.profile = profile_from(offsets, chord);
  std::vector<ComplexPoint> dirs;
  for (const auto& s : rep.profile.samples) dirs.push_back(s.dir);
  rep.angular_spread = line_spread(dirs);
  if (dirs.size() < 2) {
    rep.verdict = "inconclusive";
  } else if (rep.angular_spread > spread_threshold) {
    rep.verdict = "no single tangent";
  } else {
    rep.verdict = "consistent with a tangent";
  }
  return rep;
}

/// Real value of an expansion from a deep convergent (error below 1e-30 or exact).
inline double cf_value(const CFExpansion& cf) {
  const std::size_t depth = std::min<std::size_t>(cf.known_terms(), 80);
  const auto conv = convergents(cf, depth);
  return conv.back().frac.to_double();
}

/// Direction cluster at t_rho for an irrational rho given by its expansion.
inline ClusterReport direction_cluster(const CFExpansion& rho, const std::vector<double>& offsets,
                                       double rel_tol = 1e-3,
                                       double spread_threshold = kDefaultSpreadThreshold,
                                       const SeriesConfig& cfg = {}) {
  if (rho.terminates()) throw Error(ErrorCode::invalid_argument, "rho must be irrational");
  if (rho.known_terms() < 8) {
    throw Error(ErrorCode::insufficient_precision, "too few certified quotients for rho");
  }
  const TimePoint x0 = TimePoint::from_x(cf_value(rho));
  return cluster_from(
      offsets, [&](double h) { return certified_chord(x0, h, rel_tol, cfg); }, spread_threshold);
}

inline ClusterReport direction_cluster(const CFExpansion& rho, const HSchedule& sched,
                                       double rel_tol = 1e-3,
                                       double spread_threshold = kDefaultSpreadThreshold,
                                       const SeriesConfig& cfg = {}) {
  sched.validate(cfg);
  return direction_cluster(rho, sched.offsets(), rel_tol, spread_threshold, cfg);
}

/// Offsets at the scales of the convergent errors |rho - p_n/q_n| lying in [h_min, h_max],
/// each with multipliers {1/2, 1, 2} on both sides.
inline std::vector<double> convergent_offsets(const CFExpansion& rho, double h_min, double h_max,
                                              std::size_t depth = 40) {
  depth = std::min(depth, rho.known_terms());
  std::vector<double> out;
  for (const auto& c : convergents(rho, depth)) {
    if (std::isinf(c.log_error_hi)) continue;
    const double err = std::exp(0.5 * (c.log_error_lo + c.log_error_hi));
    for (double m : {0.5, 1.0, 2.0}) {
      const double h = m * err;
      if (h >= h_min && h <= h_max) {
        out.push_back(h);
        out.push_back(-h);
      }
    }
  }
  return out;
}

struct LemmaWitness {
  Rational pq;
  double h = 0.0;  // x units
  double ratio = 0.0;
};

struct LemmaEstimate {
  double c_hat = 0.0;
  LemmaWitness witness;
  std::size_t samples = 0;
};

/// |phi(t_{p/q} + h) - phi(t_{p/q})| * sqrt(q) / sqrt(|h|), h in x units.
inline double lemma_ratio(const TimePoint& x0, std::int64_t q, double hx, double rel_tol,
                          const SeriesConfig& cfg = {}) {
  const EvalResult r = phi_delta_x(x0, hx, rel_tol, cfg);
  return std::abs(r.value) * std::sqrt(static_cast<double>(q)) / std::sqrt(std::fabs(hx));
}

/// C-hat = max over p/q (0 <= p < q <= q_max, gcd 1) and log-spaced |h| in [floor, 1/q^2]
/// (both signs) of the lemma ratio.
inline LemmaEstimate lemma_constant_estimate(std::int64_t q_max, std::size_t h_per_q,
                                             double rel_tol = 1e-3, const SeriesConfig& cfg = {}) {
  require(q_max >= 2, ErrorCode::invalid_argument, "q_max must be >= 2");
  require(h_per_q >= 4, ErrorCode::invalid_argument, "h_per_q must be >= 4");
  const double floor_x = kTwoPi * cfg.h_floor * (1.0 + 1e-9);
  LemmaEstimate est;
  for (std::int64_t q = 1; q <= q_max; ++q) {
    const double top = 1.0 / (static_cast<double>(q) * static_cast<double>(q));
    const double step = std::log(top / floor_x) / static_cast<double>(h_per_q - 1);
    for (std::int64_t p = 0; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const TimePoint x0 = TimePoint::at_rational(p, q);
      for (std::size_t j = 0; j < h_per_q; ++j) {
        const double h = j + 1 == h_per_q ? floor_x : top * std::exp(-step * static_cast<double>(j));
        for (double hs : {h, -h}) {
          const double ratio = lemma_ratio(x0, q, hs, rel_tol, cfg);
          ++est.samples;
          if (ratio > est.c_hat) {
            est.c_hat = ratio;
            est.witness = {Rational(p, q), hs, ratio};
          }
        }
      }
    }
  }
  return est;
}

}  // namespace rnf
