#pragma once

// Acceptance criteria 1-9 as callable checks; shared by the acceptance binary
// and `rnf report`.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "rnf/rnf.hpp"

namespace rnf::suite {

using nlohmann::json;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;
  json details = json::object();
  double seconds = 0.0;
};

inline constexpr double kDeg = std::numbers::pi / 180.0;

/// Lemma constant frozen from q <= 20; computed once per process.
inline double frozen_c_hat() {
  static const double c = lemma_constant_estimate(20, 8).c_hat;
  return c;
}

inline CriterionResult identity_suite() {
  CriterionResult r{1, "identity suite"};
  const double tol = 1e-8;
  double worst_identity = 0.0, worst_quasi = 0.0, worst_conj = 0.0;
  // dyadic x keeps x + 1, -x and -2x exact
  for (int j = 0; j < 1000; ++j) {
    const double x = (2.0 * j + 1.0) / 2048.0;
    const TimePoint tp = TimePoint::from_x(x);
    const ComplexPoint phi = eval_phi(tp, tol).value;
    const ComplexPoint d = eval_phi_D(-2.0 * x, kTwoPi * tol).value;
    const ComplexPoint rhs = ComplexPoint{0.0, -1.0} * d / kTwoPi + ComplexPoint{0.0, tp.t()} + 1.0 / 12.0;
    worst_identity = std::max(worst_identity, std::abs(phi - rhs));
    const ComplexPoint shifted = eval_phi(TimePoint::from_x(x + 1.0), tol).value;
    worst_quasi = std::max(worst_quasi, std::abs(shifted - phi - ComplexPoint{0.0, 1.0 / kTwoPi}));
    const ComplexPoint mirrored = eval_phi(TimePoint::from_x(-x), tol).value;
    worst_conj = std::max(worst_conj, std::abs(mirrored - std::conj(phi)));
  }
  const double bound = 3.0 * tol;
  r.pass = worst_identity <= bound && worst_quasi <= bound && worst_conj <= bound;
  r.details = {{"tol", tol},
               {"max_identity_error", worst_identity},
               {"max_quasi_periodicity_error", worst_quasi},
               {"max_conjugation_error", worst_conj}};
  char buf[160];
  std::snprintf(buf, sizeof buf, "max errors identity %.2e, quasi-period %.2e, conjugation %.2e (bound %.0e)",
                worst_identity, worst_quasi, worst_conj, bound);
  r.summary = buf;
  return r;
}

inline CriterionResult lemma_bound(std::uint64_t seed) {
  CriterionResult r{2, "lemma bound"};
  const auto est = lemma_constant_estimate(20, 8);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> uq(1, 60);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double floor_x = kTwoPi * SeriesConfig{}.h_floor * (1.0 + 1e-9);
  double worst = 0.0;
  std::size_t violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t q = uq(rng);
    std::int64_t p = std::uniform_int_distribution<std::int64_t>(0, q - 1)(rng);
    while (std::gcd(p, q) != 1) p = (p + 1) % q;
    const double top = 1.0 / static_cast<double>(q * q);
    const double h = top * std::pow(floor_x / top, u(rng)) * (u(rng) < 0.5 ? -1.0 : 1.0);
    const double ratio = lemma_ratio(TimePoint::at_rational(p, q), q, h, 1e-3);
    worst = std::max(worst, ratio);
    if (ratio > 1.1 * est.c_hat) ++violations;
  }
  r.pass = violations == 0;
  r.details = {{"c_hat", est.c_hat},
               {"witness", {{"p", est.witness.pq.p64()}, {"q", est.witness.pq.q64()}, {"h", est.witness.h}}},
               {"holdout_samples", 1000},
               {"holdout_max_ratio", worst},
               {"violations", violations}};
  char buf[160];
  std::snprintf(buf, sizeof buf, "C_hat %.5f; hold-out max ratio %.5f vs 1.1 C_hat %.5f, %zu violations",
                est.c_hat, worst, 1.1 * est.c_hat, violations);
  r.summary = buf;
  return r;
}

/// Golden-like, sqrt(2)-like and random-quotient irrationals in (0, 1).
inline std::vector<CFExpansion> random_irrationals(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> small(1, 4), wide(1, 40), len(0, 12);
  std::vector<CFExpansion> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<BigInt> prefix;
    const int kind = static_cast<int>(i % 3);
    const int l = kind == 2 ? 30 : len(rng);
    for (int k = 0; k < l; ++k) prefix.push_back(kind == 2 ? wide(rng) : small(rng));
    std::vector<BigInt> period;
    if (kind == 0) period = {1};
    if (kind == 1) period = {2};
    if (kind == 2) period = {wide(rng), wide(rng)};
    out.push_back(CFExpansion::periodic(0, prefix, period));
  }
  return out;
}

inline CriterionResult cover_validity(std::uint64_t seed) {
  CriterionResult r{3, "cover validity"};
  const double c_used = 2.0 * frozen_c_hat();
  const auto cover = build_cover(10, 10000, c_used);
  const auto pts = random_irrationals(100, seed);
  std::size_t passed = 0;
  double worst = 0.0;
  json failures = json::array();
  for (const auto& rho : pts) {
    try {
      const auto e = verify_point(cover, rho);
      worst = std::max(worst, (e.distance + e.error_bound) / e.radius);
      if (e.covered) {
        ++passed;
      } else {
        failures.push_back({{"rho", e.rho}, {"q", e.convergent.q64()}});
      }
    } catch (const Error& err) {
      failures.push_back({{"rho", cf_value(rho)}, {"error", err.what()}});
    }
  }
  r.pass = passed == pts.size();
  r.details = {{"c_used", c_used},       {"q0", 10},           {"q_max", 10000},
               {"balls", cover.size()},  {"passed", passed},   {"total", pts.size()},
               {"max_distance_over_radius", worst}, {"failures", failures}};
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu/%zu covered with C_used = %.5f; max (distance + error) / radius %.3f",
                passed, pts.size(), c_used, worst);
  r.summary = buf;
  return r;
}

inline CriterionResult dimension_threshold() {
  CriterionResult r{4, "dimension threshold"};
  auto ratio = [](double alpha, std::int64_t q) {
    return content_partial_sum(alpha, 10, 10 * q, 1.0).partial /
           content_partial_sum(alpha, 10, q, 1.0).partial;
  };
  const double floor = 1.0 + 0.5 * (std::pow(10.0, 0.05) - 1.0);
  bool low_ok = true, high_ok = true;
  double prev = std::numeric_limits<double>::infinity();
  json rows = json::array();
  for (std::int64_t q : {1000, 10000, 100000}) {
    const double r130 = ratio(1.30, q);
    const auto cs = content_partial_sum(1.40, 10, q, 1.0);
    const double r140 = ratio(1.40, q);
    const double cert = 1.0 + cs.tail_bound / cs.partial;
    low_ok = low_ok && r130 >= floor;
    high_ok = high_ok && r140 < prev && r140 <= cert;
    prev = r140;
    rows.push_back({{"q_max", q}, {"ratio_1_30", r130}, {"ratio_1_40", r140}, {"ratio_1_40_bound", cert}});
  }
  const bool exact = spectrum_bound(0.75) == 4.0 / 3.0;
  r.pass = low_ok && high_ok && exact;
  r.details = {{"ratios", rows},
               {"floor_1_30", floor},
               {"verdict_1_30", to_string(content_partial_sum(1.30, 10, 1000, 1.0).verdict)},
               {"verdict_1_40", to_string(content_partial_sum(1.40, 10, 1000, 1.0).verdict)},
               {"spectrum_bound_3_4", spectrum_bound(0.75)}};
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "alpha 1.30 ratios >= %.4f: %s; alpha 1.40 ratios decreasing under 1 + tail/partial: %s; "
                "spectrum_bound(3/4) = 4/3: %s",
                floor, low_ok ? "yes" : "no", high_ok ? "yes" : "no", exact ? "yes" : "no");
  r.summary = buf;
  return r;
}

inline CriterionResult corners() {
  CriterionResult r{5, "corners"};
  bool ok = true;
  double worst_root = 0.0, worst_ratio = 0.0;
  json rows = json::array();
  for (const Rational& pq : {Rational(0, 1), Rational(1, 3), Rational(1, 4), Rational(2, 5), Rational(3, 4)}) {
    const double q = pq.q().convert_to<double>();
    const auto sched = HSchedule::spanning(std::min(1e-2, 1.0 / (q * q)), 1e-8, 0.25);
    const auto rep = corner_check(pq, sched);
    worst_root = std::max(worst_root, rep.nearest_eighth_root_distance);
    worst_ratio = std::max(worst_ratio, rep.ratio_distance_to_i);
    ok = ok && rep.nearest_eighth_root_distance < 1e-2 && rep.ratio_distance_to_i < 1e-2;
    rows.push_back({{"pq", pq.str()},
                    {"eighth_root_distance", rep.nearest_eighth_root_distance},
                    {"ratio_distance_to_i", rep.ratio_distance_to_i},
                    {"right_dispersion", rep.right.dispersion},
                    {"left_dispersion", rep.left.dispersion}});
  }
  r.pass = ok;
  r.details = {{"rationals", rows}};
  char buf[160];
  std::snprintf(buf, sizeof buf, "max eighth-root distance %.2e rad, max ratio distance to i %.2e rad (bound 1e-2)",
                worst_root, worst_ratio);
  r.summary = buf;
  return r;
}

inline constexpr double kSpiralRatio = 0.97;

/// Window of about one halving of h.
inline std::size_t spiral_window() {
  return static_cast<std::size_t>(std::lround(std::log(0.5) / std::log(kSpiralRatio)));
}

inline CriterionResult spirals() {
  CriterionResult r{6, "spirals"};
  bool ok = true;
  std::string text;
  json rows = json::array();
  for (const Rational& pq : {Rational(1, 2), Rational(1, 6)}) {
    const auto rep = spiral_profile(pq, HSchedule::spanning(1e-2, 1e-7, kSpiralRatio, Side::both));
    const std::size_t w = spiral_window();
    const bool mono = window_envelope_decreasing(rep.slope_right, w) &&
                      window_envelope_decreasing(rep.slope_left, w);
    const bool pass = rep.winding_total > 6.0 * std::numbers::pi && rep.dense && mono;
    ok = ok && pass;
    rows.push_back({{"pq", pq.str()},
                    {"winding_total", rep.winding_total},
                    {"direction_gaps_deg", rep.direction_gaps / kDeg},
                    {"slope_envelope_decreasing", mono},
                    {"window", w},
                    {"resolved", rep.profile.samples.size()},
                    {"unresolved", rep.profile.unresolved.size()}});
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s winding %.1f pi, gap %.2f deg, slope envelope %s", text.empty() ? "" : "; ",
                  pq.str().c_str(), rep.winding_total / std::numbers::pi, rep.direction_gaps / kDeg,
                  mono ? "decreasing" : "not decreasing");
    text += buf;
  }
  r.pass = ok;
  r.details = {{"rationals", rows}, {"ratio", kSpiralRatio}, {"h_range", {1e-7, 1e-2}}};
  r.summary = text;
  return r;
}

inline CriterionResult cone_witness() {
  CriterionResult r{7, "nowhere-tangent witness"};
  const auto poly = trace_image(0.0, 1.0, (std::size_t{1} << 21) + 1, 1e-7);
  const std::vector<double> hs{0.04, 0.02, 0.01};
  bool ok = true;
  std::string text;
  json rows = json::array();
  const std::vector<std::pair<std::string, TimePoint>> points{
      {"1/2", TimePoint::at_rational(1, 2)},
      {"golden", TimePoint::from_x(cf_value(golden_conjugate_cf()))}};
  for (const auto& [label, x0] : points) {
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 16; ++k) {
      const auto res = cone_tangent_ratio(x0, unit_at(std::numbers::pi * k / 16.0), 20.0 * kDeg, hs, poly);
      worst = std::min(worst, res.ratios.back().ratio);
    }
    ok = ok && worst >= kConeRatioFloor;
    rows.push_back({{"point", label}, {"x0", x0.x()}, {"min_terminal_ratio", worst}});
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s%s min terminal ratio %.3f", text.empty() ? "" : "; ", label.c_str(), worst);
    text += buf;
  }
  r.pass = ok;
  r.details = {{"points", rows}, {"directions", 16}, {"opening_deg", 20}, {"h", hs}, {"trace_gap", max_gap(poly)}};
  r.summary = text + " (floor 0.05)";
  return r;
}

inline Polyline synthetic_polyline(std::vector<ComplexPoint> pts) {
  Polyline p;
  for (std::size_t i = 0; i < pts.size(); ++i) p.x.push_back(static_cast<double>(i));
  p.points = std::move(pts);
  return p;
}

inline std::vector<double> dyadic_scales(int from, int to) {
  std::vector<double> s;
  for (int k = from; k <= to; ++k) s.push_back(std::ldexp(1.0, -k));
  return s;
}

inline CriterionResult controls(std::uint64_t seed) {
  CriterionResult r{8, "controls"};
  // parabola (s, s^2) through the origin, tangent to the real axis
  std::vector<ComplexPoint> parabola;
  for (int i = -20000; i <= 20000; ++i) {
    const double s = i * 1e-5;
    parabola.emplace_back(s, s * s);
  }
  const auto aligned = cone_ratios({parabola}, Cone({0, 0}, {1, 0}, 20.0 * kDeg), {0.1, 0.05, 0.02, 0.01});
  const double aligned_last = aligned.ratios.back().ratio;

  std::vector<ComplexPoint> seg;
  for (int i = 0; i <= 10000; ++i) seg.emplace_back(i / 10000.0, 0.5 * i / 10000.0);
  const double seg_slope = box_count(synthetic_polyline(seg), dyadic_scales(3, 9)).slope;

  std::vector<ComplexPoint> sq;
  const int n = 1024;
  for (int row = 0; row < n; ++row) {
    for (int c = 0; c < n; ++c) sq.emplace_back(static_cast<double>(row % 2 ? n - 1 - c : c) / n,
                                                static_cast<double>(row) / n);
  }
  const double sq_slope = box_count(synthetic_polyline(std::move(sq)), dyadic_scales(3, 6)).slope;

  const auto phi = trace_image(0.0, 1.0, 1000001, 1e-6);
  const auto scales = dyadic_scales(4, 10);
  const auto fit = box_count(phi, scales);
  const auto spread = box_count_offsets(phi, scales, 4, seed);

  const bool ok = aligned_last == 0.0 && std::fabs(seg_slope - 1.0) <= 0.05 &&
                  std::fabs(sq_slope - 2.0) <= 0.05 && fit.slope >= 1.0 && fit.slope <= 1.45;
  r.pass = ok;
  r.details = {{"aligned_cone_ratios", json::array()},
               {"segment_slope", seg_slope},
               {"square_slope", sq_slope},
               {"phi_slope", fit.slope},
               {"phi_fit_r2", fit.fit_r2},
               {"phi_usable_scales", fit.scales.size()},
               {"phi_offset_slopes", spread.slopes},
               {"phi_offset_spread", spread.spread}};
  for (const auto& c : aligned.ratios) r.details["aligned_cone_ratios"].push_back({{"h", c.h}, {"ratio", c.ratio}});
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "aligned cone ratio %.3g; segment slope %.4f; square slope %.4f; phi slope %.4f (r2 %.4f, offset spread %.3f)",
                aligned_last, seg_slope, sq_slope, fit.slope, fit.fit_r2, spread.spread);
  r.summary = buf;
  return r;
}

inline CriterionResult diophantine(std::uint64_t seed) {
  CriterionResult r{9, "diophantine engine"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> up(-1000000000000LL, 1000000000000LL);
  std::uniform_int_distribution<std::int64_t> uq(1, 1000000000000LL);
  std::size_t round_trip_fail = 0, bound_fail = 0, checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const Rational x(up(rng), uq(rng));
    const auto cf = cf_expand(x);
    const auto conv = convergents(cf, cf.known_terms());
    if (conv.back().frac != x) ++round_trip_fail;
    for (std::size_t n = 0; n + 1 < conv.size(); ++n) {
      const BigInt& q = conv[n].frac.q();
      ++checked;
      if (!(boost::multiprecision::abs(x.exact() - conv[n].frac.exact()) < BigRational(1, q * q))) ++bound_fail;
    }
  }
  const auto est = gamma_limsup(golden_conjugate_cf(), 30);
  const double rel = std::fabs(est.gamma - 2.0) / 2.0;
  r.pass = round_trip_fail == 0 && bound_fail == 0 && rel <= 0.02;
  r.details = {{"round_trip_failures", round_trip_fail},
               {"convergents_checked", checked},
               {"bound_failures", bound_fail},
               {"golden_gamma_depth_30", est.gamma},
               {"golden_gamma_relative_error", rel},
               {"window", {est.window_begin, est.window_end}}};
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "round trip failures %zu/10000; bound failures %zu/%zu; golden gamma at depth 30 = %.4f "
                "(relative error %.2f%%, limit 2%%)",
                round_trip_fail, bound_fail, checked, est.gamma, 100.0 * rel);
  r.summary = buf;
  return r;
}

inline CriterionResult run_criterion(int id, std::uint64_t seed = 20240601) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  switch (id) {
    case 1: r = identity_suite(); break;
    case 2: r = lemma_bound(seed); break;
    case 3: r = cover_validity(seed); break;
    case 4: r = dimension_threshold(); break;
    case 5: r = corners(); break;
    case 6: r = spirals(); break;
    case 7: r = cone_witness(); break;
    case 8: r = controls(seed); break;
    case 9: r = diophantine(seed); break;
    default: throw Error(ErrorCode::invalid_argument, "criterion must be 1..9");
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline json to_json(const CriterionResult& r, bool with_time = false) {
  json j = {{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"summary", r.summary}, {"details", r.details}};
  if (with_time) j["seconds"] = r.seconds;
  return j;
}

}  // namespace rnf::suite
