#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rnf/local_geometry.hpp"

using namespace rnf;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Brute-force chord from the unpaired series, independent of the library kernels.
ComplexPoint oracle_chord(double x0, double hx, std::uint64_t n) {
  long double re = 0.0L, im = hx / (2.0L * std::numbers::pi_v<long double>);
  for (std::uint64_t k = n; k >= 1; --k) {
    const long double k2 = static_cast<long double>(k) * static_cast<long double>(k);
    const long double a0 = std::fmod(k2 * x0, 1.0L);
    const long double a1 = std::fmod(k2 * (x0 + hx), 1.0L);
    const long double tp = 2.0L * std::numbers::pi_v<long double>;
    re += (std::cos(tp * a0) - std::cos(tp * a1)) / (2.0L * std::numbers::pi_v<long double> *
                                                      std::numbers::pi_v<long double> * k2);
    im += (std::sin(tp * a1) - std::sin(tp * a0)) / (2.0L * std::numbers::pi_v<long double> *
                                                      std::numbers::pi_v<long double> * k2);
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

}  // namespace

TEST(HSchedule, SpanningAndOffsets) {
  const auto s = HSchedule::spanning(1e-2, 1e-4, 0.1, Side::both);
  EXPECT_EQ(s.count, 3u);
  EXPECT_NEAR(s.smallest(), 1e-4, 1e-18);
  const auto off = s.offsets();
  ASSERT_EQ(off.size(), 6u);
  EXPECT_GT(off[0], 0);
  EXPECT_LT(off[3], 0);
  EXPECT_DOUBLE_EQ(off[1], -off[4]);
  EXPECT_THROW(HSchedule({1e-8, 0.1, 4}).validate(), Error);
  EXPECT_THROW(HSchedule::spanning(1e-2, 1e-4, 1.5), Error);
}

TEST(ChordDirection, UnitModulus) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(0.0, 1.0), ue(-7.0, -2.0);
  for (int i = 0; i < 40; ++i) {
    const double h = std::pow(10.0, ue(rng)) * (i % 2 ? 1.0 : -1.0);
    const auto d = chord_direction(TimePoint::from_x(ux(rng)), h);
    EXPECT_NEAR(std::abs(d), 1.0, 1e-12);
  }
}

TEST(ChordDirection, AgreesWithBruteForceChord) {
  for (double h : {3e-3, -1e-3, 2e-4}) {
    const Chord c = certified_chord(TimePoint::from_x(0.3), h, 1e-4);
    const ComplexPoint want = oracle_chord(0.3, h, 200000);
    EXPECT_LT(std::abs(c.delta - want), c.error_bound + 1e-5 * std::abs(want)) << h;
  }
}

TEST(ChordDirection, CornerConvergenceAtZero) {
  const TimePoint x0 = TimePoint::at_rational(0, 1);
  EXPECT_LT(angular_distance(chord_direction(x0, 1e-6), chord_direction(x0, 1e-8)), 0.02);
}

TEST(ChordDirection, LargeTurnsAtOneHalf) {
  const TimePoint x0 = TimePoint::at_rational(1, 2);
  double best = 0.0;
  for (double h = 1e-2; h > 1e-5; h *= 0.5) {
    best = std::max(best, angular_distance(chord_direction(x0, h), chord_direction(x0, h / 4)));
  }
  EXPECT_GT(best, 1.0);
}

TEST(ChordDirection, UnresolvableChordIsReported) {
  // |delta| ~ h^{3/2} at 1/2 falls below what the term cap can certify
  try {
    (void)chord_direction(TimePoint::at_rational(1, 2), 2e-7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unresolvable_chord);
  }
}

TEST(CornerCheck, OneThirdRatioIsI) {
  const auto rep = corner_check(Rational(1, 3), HSchedule::spanning(1.0 / 9.0, 1e-8, 0.25));
  EXPECT_TRUE(rep.limits_found);
  EXPECT_LT(rep.ratio_distance_to_i, 1e-2);
  EXPECT_NEAR(std::abs(rep.ratio_right_over_left), 1.0, 1e-12);
}

TEST(CornerCheck, ZeroRightLimitOnEighthRootGrid) {
  const auto rep = corner_check(Rational(0, 1), HSchedule::spanning(1e-4, 1e-9, 0.25));
  ASSERT_TRUE(rep.right.limit_estimate.has_value());
  EXPECT_LT(rep.nearest_eighth_root_distance, 1e-2);
}

TEST(CornerCheck, QuarterEpqIsEighthRoot) {
  const auto rep = corner_check(Rational(1, 4), HSchedule::spanning(1.0 / 16.0, 1e-8, 0.25));
  EXPECT_LT(eighth_root_distance(rep.e_pq_estimate), 1e-2);
  for (const auto& s : rep.right.samples) EXPECT_NEAR(std::abs(s.dir), 1.0, 1e-12);
}

TEST(CornerCheck, PreconditionsAndWrongClass) {
  try {
    (void)corner_check(Rational(1, 2), HSchedule::spanning(0.25, 1e-4, 0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::use_spiral_profile);
  }
  EXPECT_THROW(corner_check(Rational(1, 3), HSchedule::spanning(0.5, 1e-4, 0.5)), Error);
}

TEST(CornerCheck, RefinementImprovesLimits) {
  for (const Rational& pq : {Rational(0, 1), Rational(1, 3), Rational(1, 4), Rational(2, 5),
                             Rational(3, 7)}) {
    const double q = pq.q().convert_to<double>();
    const double top = std::min(1e-2, 1.0 / (q * q));
    // tight tolerance so truncation error stays below the distance being measured
    const auto coarse = corner_check(pq, HSchedule::spanning(top, 1e-5, 0.25), 1e-5);
    const auto fine = corner_check(pq, HSchedule::spanning(top, 1e-8, 0.25), 1e-5);
    EXPECT_LE(fine.right.dispersion, coarse.right.dispersion + 1e-12) << pq.str();
    EXPECT_LE(fine.left.dispersion, coarse.left.dispersion + 1e-12) << pq.str();
    EXPECT_LT(fine.ratio_distance_to_i, coarse.ratio_distance_to_i) << pq.str();
  }
}

TEST(SpiralProfile, WindsAndCoversAtOneHalf) {
  const auto rep = spiral_profile(Rational(1, 2), HSchedule::spanning(1e-2, 1e-5, 0.9));
  EXPECT_GE(rep.winding_total, 0.0);
  EXPECT_GT(rep.winding_total, 6.0 * std::numbers::pi);
  for (const auto& s : rep.profile.samples) EXPECT_NEAR(std::abs(s.dir), 1.0, 1e-12);
  // phi'(t_{1/2}) = 0: the chord slope falls along the schedule
  EXPECT_TRUE(window_envelope_decreasing(rep.slope_right, 7));
}

TEST(SpiralProfile, DeeperScheduleAddsWinding) {
  const auto shallow = spiral_profile(Rational(1, 2), HSchedule::spanning(1e-2, 1e-4, 0.9));
  const auto deep = spiral_profile(Rational(1, 2), HSchedule::spanning(1e-2, 1e-5, 0.9));
  EXPECT_GE(deep.winding_total - shallow.winding_total, 2.0 * std::numbers::pi);
}

TEST(SpiralProfile, WrongClass) {
  try {
    (void)spiral_profile(Rational(1, 3), HSchedule::spanning(1e-2, 1e-4, 0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::use_corner_check);
  }
}

TEST(WindowEnvelope, Basics) {
  EXPECT_TRUE(window_envelope_decreasing({5, 6, 4, 3, 2, 1}, 2));
  EXPECT_FALSE(window_envelope_decreasing({5, 6, 4, 7, 2, 1}, 2));
  EXPECT_FALSE(window_envelope_decreasing({3, 4}, 1));
}

TEST(DirectionCluster, GoldenPointSpreadsWidely) {
  const auto rho = golden_conjugate_cf();
  const auto rep = direction_cluster(rho, convergent_offsets(rho, 1e-7, 1e-2));
  EXPECT_GE(rep.angular_spread, 30.0 * kDeg);
  EXPECT_EQ(rep.verdict, "no single tangent");
}

TEST(DirectionCluster, SingleSampleIsInconclusive) {
  const auto rep = cluster_from({1e-3}, [](double h) { return Chord{{h, 0.0}, 0.0}; });
  EXPECT_EQ(rep.angular_spread, 0.0);
  EXPECT_EQ(rep.verdict, "inconclusive");
}

TEST(DirectionCluster, SmoothCurveControl) {
  // gamma(s) = (s, s^2): chords h (1, h) approach the real axis from both sides
  auto smooth = [](double h) { return Chord{{h, h * h}, 0.0}; };
  double prev = 1.0;
  for (double top : {1e-1, 1e-2, 1e-3}) {
    std::vector<double> off;
    for (double h = top; h > top * 1e-3; h *= 0.5) {
      off.push_back(h);
      off.push_back(-h);
    }
    const auto rep = cluster_from(off, smooth);
    EXPECT_LE(rep.angular_spread, prev);
    prev = rep.angular_spread;
  }
  EXPECT_LT(prev, 0.2 * kDeg);
}

TEST(DirectionCluster, RejectsRationalInput) {
  EXPECT_THROW(direction_cluster(cf_expand(Rational(1, 3)), std::vector<double>{1e-3}), Error);
}

TEST(LemmaConstant, RefinementStable) {
  const auto a = lemma_constant_estimate(10, 8);
  const auto b = lemma_constant_estimate(10, 16);
  EXPECT_GT(a.c_hat, 0.0);
  EXPECT_TRUE(std::isfinite(b.c_hat));
  EXPECT_LT(std::fabs(b.c_hat - a.c_hat) / a.c_hat, 0.10);
  EXPECT_EQ(b.samples, 2 * a.samples);
}

TEST(LemmaConstant, UniformInQ) {
  const auto a = lemma_constant_estimate(20, 4);
  const auto b = lemma_constant_estimate(40, 4);
  EXPECT_LT(std::fabs(b.c_hat - a.c_hat) / a.c_hat, 0.20);
  const double q = b.witness.pq.q().convert_to<double>();
  EXPECT_LE(std::fabs(b.witness.h), 1.0 / (q * q));
}

TEST(LemmaConstant, HoldOutSamples) {
  const double c_hat = lemma_constant_estimate(12, 6).c_hat;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::int64_t> uq(1, 30);
  std::uniform_real_distribution<double> ue(0.0, 1.0);
  const double floor_x = kTwoPi * SeriesConfig{}.h_floor * 1.01;
  for (int i = 0; i < 200; ++i) {
    const std::int64_t q = uq(rng);
    std::int64_t p = std::uniform_int_distribution<std::int64_t>(0, q - 1)(rng);
    while (std::gcd(p, q) != 1) p = (p + 1) % q;
    const double top = 1.0 / static_cast<double>(q * q);
    const double h = top * std::pow(floor_x / top, ue(rng)) * (i % 2 ? 1.0 : -1.0);
    EXPECT_LE(lemma_ratio(TimePoint::at_rational(p, q), q, h, 1e-3), 1.1 * c_hat)
        << p << "/" << q << " h=" << h;
  }
}
