#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "rnf/compensated.hpp"
#include "rnf/local_geometry.hpp"
#include "rnf/phase.hpp"
#include "rnf/series.hpp"

using namespace rnf;
using cd = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

// Oracles: term-by-term sums with no recurrence, phases reduced in long double
// (or exactly for rational phases). Accurate enough for N up to ~1e6.

long double frac_turns(long double v) { return v - std::floor(v); }

std::complex<long double> cis_ld(long double turns) {
  const long double a = 2.0L * std::numbers::pi_v<long double> * turns;
  return {std::cos(a), std::sin(a)};
}

// sum_{k=1}^{N} exp(2 pi i k^2 c) / k^2, c given exactly as p/q
cd oracle_quadratic_rational(std::int64_t p, std::int64_t q, std::uint64_t n) {
  std::complex<long double> s = 0;
  for (std::uint64_t k = n; k >= 1; --k) {
    const auto kq = static_cast<std::int64_t>(k % static_cast<std::uint64_t>(q));
    std::int64_t r = (kq * kq % q) * (p % q) % q;
    if (r < 0) r += q;
    s += cis_ld(static_cast<long double>(r) / q) / (static_cast<long double>(k) * k);
  }
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

cd oracle_quadratic(long double c, std::uint64_t n) {
  std::complex<long double> s = 0;
  for (std::uint64_t k = n; k >= 1; --k) {
    const long double kk = static_cast<long double>(k) * k;
    s += cis_ld(frac_turns(kk * c)) / kk;
  }
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

// phi by its unpaired definition over -N..N (k = 0 contributes i t)
cd oracle_phi(double t, std::int64_t n) {
  const long double x = 2.0L * std::numbers::pi_v<long double> * t;
  std::complex<long double> s{0.0L, static_cast<long double>(t)};
  for (std::int64_t k = n; k >= 1; --k) {
    for (int sign : {1, -1}) {
      const long double kk = static_cast<long double>(k * sign) * static_cast<long double>(k * sign);
      const std::complex<long double> z = cis_ld(-frac_turns(kk * x));
      s += (z - 1.0L) / (-4.0L * std::numbers::pi_v<long double> * std::numbers::pi_v<long double> * kk);
    }
  }
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

double oracle_R(double x, std::uint64_t n) {
  long double s = 0;
  for (std::uint64_t k = n; k >= 1; --k) {
    const long double kk = static_cast<long double>(k) * k;
    s += std::sin(2.0L * std::numbers::pi_v<long double> *
                  frac_turns(kk * x / (2.0L * std::numbers::pi_v<long double>))) /
         kk;
  }
  return static_cast<double>(s);
}

}  // namespace

TEST(QuadraticPhase, DyadicReductionMatchesExactRationalArithmetic) {
  using boost::multiprecision::cpp_rational;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double c = u(rng);
    const auto ph = QuadraticPhase::dyadic(c);
    for (std::uint64_t k : {1ull, 7ull, 1000ull, 123456ull, 99999989ull, 1000000000ull}) {
      cpp_rational v = cpp_rational(c) * cpp_rational(k) * cpp_rational(k);
      // centred fractional part
      cpp_rational f = v - cpp_rational(boost::multiprecision::cpp_int(
                               boost::multiprecision::numerator(v) /
                               boost::multiprecision::denominator(v)));
      while (f >= cpp_rational(1, 2)) f -= 1;
      while (f < cpp_rational(-1, 2)) f += 1;
      EXPECT_NEAR(ph.turns_square(k), f.convert_to<double>(), 1e-15) << c << " k=" << k;
    }
  }
}

TEST(QuadraticPhase, IntegerAndHalfIntegerDetection) {
  EXPECT_TRUE(QuadraticPhase::dyadic(3.0L).is_integer());
  EXPECT_TRUE(QuadraticPhase::dyadic(-2.5L).is_half_integer());
  EXPECT_FALSE(QuadraticPhase::dyadic(0.25L).is_half_integer());
  EXPECT_TRUE(QuadraticPhase::rational(7, 14).is_half_integer());
  EXPECT_TRUE(QuadraticPhase::rational(-6, 3).is_integer());
  EXPECT_THROW(QuadraticPhase::rational(1, 0), Error);
}

TEST(CompensatedSum, RecoversSmallAddendsLostByNaiveSummation) {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  EXPECT_NEAR(s.value(), 1e-13, 1e-24);  // naive summation returns 0
}

TEST(Kernel, QuadraticSumMatchesDirectSummationAcrossChunks) {
  const std::uint64_t n = detail::kChunk + 12345;  // crosses a chunk boundary
  for (auto [p, q] : std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 3}, {-5, 7}, {2, 9}}) {
    const auto got = detail::quadratic_sum(QuadraticPhase::rational(p, q), n);
    const cd want = oracle_quadratic_rational(p, q, n);
    EXPECT_LT(std::abs(got.oscillatory - want), 1e-13) << p << "/" << q;
  }
  for (long double c : {0.123456789L, -0.7071067811865476L, 1e-6L}) {
    const auto got = detail::quadratic_sum(QuadraticPhase::dyadic(c), 200000);
    EXPECT_LT(std::abs(got.oscillatory - oracle_quadratic(c, 200000)), 1e-11) << c;
  }
}

TEST(Kernel, DeltaSumMatchesDifferenceOfDirectSums) {
  const std::uint64_t n = 300000;
  const auto base = QuadraticPhase::rational(-1, 3);
  const long double hc = -1e-3L;
  const cd got = detail::delta_sum(base, QuadraticPhase::dyadic(hc), n);
  std::complex<long double> want = 0;
  for (std::uint64_t k = n; k >= 1; --k) {
    const long double kk = static_cast<long double>(k) * k;
    const long double b = static_cast<long double>(static_cast<std::int64_t>(k % 3) * (k % 3) % 3);
    const auto z0 = cis_ld(-b / 3.0L);
    const auto zh = cis_ld(frac_turns(kk * hc));
    want += z0 * (zh - 1.0L) / kk;
  }
  EXPECT_LT(std::abs(got - cd(static_cast<double>(want.real()), static_cast<double>(want.imag()))),
            1e-12);
}

TEST(Kernel, ResultIsIndependentOfThreadCount) {
#if defined(_OPENMP)
  const auto ph = QuadraticPhase::dyadic(0.3183L);
  const std::uint64_t n = 4 * detail::kChunk + 17;
  omp_set_num_threads(1);
  const auto a = detail::quadratic_sum(ph, n);
  omp_set_num_threads(3);
  const auto b = detail::quadratic_sum(ph, n);
  omp_set_num_threads(omp_get_num_procs());
  EXPECT_EQ(a.oscillatory, b.oscillatory);
  EXPECT_EQ(a.basel, b.basel);
#else
  GTEST_SKIP() << "built without OpenMP";
#endif
}

TEST(EvalR, VanishesAtZero) {
  const auto r = eval_R(0.0, 1e-12);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_LE(r.tail_bound, 1e-12);
}

TEST(EvalR, IsOdd) {
  const double tol = 1e-7;
  EXPECT_NEAR(eval_R(-0.7, tol).value, -eval_R(0.7, tol).value, 2 * tol);
}

TEST(EvalR, QuarterPeriodValueIsPiSquaredOverEight) {
  const auto r = eval_R(pi / 2, 1e-8);
  EXPECT_LE(r.tail_bound, 1e-8);
  // closed form and an independent direct sum
  EXPECT_NEAR(r.value, pi * pi / 8, 1e-7);
  const double direct = oracle_R(pi / 2, 1000000);
  EXPECT_NEAR(eval_R(pi / 2, 1e-6).value, direct, 2e-6);
}

TEST(EvalR, TenToMinusTenNeedsMoreTermsThanTheCap) {
  try {
    (void)eval_R(pi / 2, 1e-10);
    FAIL() << "expected tolerance_infeasible";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::tolerance_infeasible);
  }
}

TEST(EvalPhiD, BaselValueAtZero) {
  const auto r = eval_phi_D(0.0, 1e-12);
  EXPECT_NEAR(r.value.real(), 0.0, 1e-15);
  EXPECT_NEAR(r.value.imag(), -pi / 6, 1e-15);
}

TEST(EvalPhiD, IsTwoPeriodic) {
  const double tol = 1e-8;
  EXPECT_LE(std::abs(eval_phi_D(2.37, tol).value - eval_phi_D(0.37, tol).value), 2 * tol);
}

TEST(EvalPhiD, RealPartIsScaledRiemannFunction) {
  const double tol = 1e-8;
  const double r = eval_R(0.3 * pi, 1e-8 * pi).value / pi;
  EXPECT_NEAR(eval_phi_D(0.3, tol).value.real(), r, 2 * tol);
  // independent direct summation of both
  EXPECT_NEAR(eval_phi_D(0.3, 1e-6).value.real(), oracle_R(0.3 * pi, 400000) / pi, 3e-6);
}

TEST(EvalPhi, VanishesAtZero) {
  const auto r = eval_phi(0.0, 1e-12);
  EXPECT_EQ(r.value, cd(0.0, 0.0));
  EXPECT_LE(r.tail_bound, 1e-12);
}

TEST(EvalPhi, OnePeriodStepIsIOverTwoPi) {
  const auto r = eval_phi(1.0 / (2 * pi), 1e-10);
  EXPECT_NEAR(r.value.real(), 0.0, 1e-10);
  EXPECT_NEAR(r.value.imag(), 1.0 / (2 * pi), 1e-10);
  const auto tagged = eval_phi(TimePoint::at_rational(1, 1), 1e-10);
  EXPECT_NEAR(tagged.value.imag(), 1.0 / (2 * pi), 1e-15);
}

TEST(EvalPhi, MatchesDuistermaatIdentityAtPointZeroFive) {
  const double tol = 1e-8;
  const cd phi = eval_phi(0.05, tol).value;
  const cd d = eval_phi_D(-0.2 * pi, 2 * pi * tol).value;
  const cd rhs = -cd(0, 1) * d / (2 * pi) + cd(0, 0.05) + 1.0 / 12;
  EXPECT_LE(std::abs(phi - rhs), 3e-8);
}

TEST(EvalPhi, MatchesUnpairedDefinition) {
  for (double t : {0.013, 0.05, -0.11, 0.4}) {
    const cd want = oracle_phi(t, 100000);
    // oracle truncated at 1e5 (tail <= 1/(pi^2 1e5) ~ 1e-6)
    EXPECT_LE(std::abs(eval_phi(t, 1e-8).value - want), 1.02e-6 + 1e-8) << t;
  }
}

TEST(EvalPhi, TruncationCertificateHoldsWhenDoublingTerms) {
  for (double t : {0.031, 0.2718, -0.05}) {
    const auto r = eval_phi(t, 1e-6);
    SeriesConfig cfg;
    const double half_tol = 1.0 / (pi * pi * 2.0 * static_cast<double>(r.truncation_N));
    const auto r2 = eval_phi(t, half_tol * (1 + 1e-12), cfg);
    EXPECT_GE(r2.truncation_N, 2 * r.truncation_N);
    EXPECT_LE(std::abs(r2.value - r.value), r.tail_bound) << t;
  }
}

TEST(EvalPhi, ConjugationAndQuasiPeriodicity) {
  const double tol = 1e-7;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double t = u(rng);
    const cd a = eval_phi(t, tol).value;
    EXPECT_LE(std::abs(eval_phi(-t, tol).value - std::conj(a)), 2 * tol);
    EXPECT_LE(std::abs(eval_phi(t + 1 / (2 * pi), tol).value - a - cd(0, 1 / (2 * pi))), 2 * tol);
  }
}

TEST(EvalPhi, RejectsNonPositiveTolerance) {
  EXPECT_THROW(eval_phi(0.1, 0.0), Error);
  EXPECT_THROW(eval_phi(0.1, -1.0), Error);
}

TEST(PhiDelta, ZeroOffsetGivesZero) {
  const auto r = phi_delta(TimePoint::from_t(0.3), 0.0, 1e-3);
  EXPECT_EQ(r.value, cd(0.0, 0.0));
}

TEST(PhiDelta, AgreesWithSubtractedForm) {
  const double tol = 1e-8;
  const auto d = phi_delta(TimePoint::from_t(0.1), 1e-3, tol / std::sqrt(1e-3));
  const auto a = eval_phi(0.1 + 1e-3, tol);
  const auto b = eval_phi(0.1, tol);
  // 2 pi t is rounded separately for each evaluation; the phase drift over N terms is ~1e-10
  EXPECT_LE(std::abs(d.value - (a.value - b.value)),
            d.tail_bound + a.tail_bound + b.tail_bound + 1e-9);
}

TEST(PhiDelta, RandomPairsAgreeWithSubtractedForm) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ut(-1.0, 1.0);
  std::uniform_real_distribution<double> le(-6.0, -2.0);
  for (int i = 0; i < 25; ++i) {
    // offsets that are exact in binary keep t0 + h exact
    const double t0 = std::ldexp(std::nearbyint(std::ldexp(ut(rng), 20)), -20);
    const double h = std::ldexp(1.0, static_cast<int>(le(rng) * 3.32));
    const double tol = 1e-7;
    const auto d = phi_delta(TimePoint::from_t(t0), h, tol / std::sqrt(h));
    const auto a = eval_phi(t0 + h, tol);
    const auto b = eval_phi(t0, tol);
    EXPECT_LE(std::abs(d.value - (a.value - b.value)), d.tail_bound + a.tail_bound + b.tail_bound + 1e-9)
        << t0 << " " << h;
  }
}

TEST(PhiDelta, BelowFloorIsRejected) {
  try {
    (void)phi_delta(TimePoint::from_t(0.2), 1e-12, 1e-3);
    FAIL() << "expected resolution_floor";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::resolution_floor);
  }
}

TEST(PhiDelta, LemmaBoundAtOneThird) {
  const auto est = lemma_constant_estimate(6, 6);
  const TimePoint x0 = TimePoint::at_rational(1, 3);
  for (double h_t : {1e-4, 1e-6, 1e-8}) {
    const auto d = phi_delta(x0, h_t, 1e-3);
    // the estimate is in x units, h_x = 2 pi h_t
    const double hx = 2 * pi * h_t;
    EXPECT_LE(std::abs(d.value), est.c_hat * std::sqrt(hx) / std::sqrt(3.0)) << h_t;
  }
}

TEST(ReduceTime, Examples) {
  auto r = reduce_time(0.0);
  EXPECT_EQ(r.x, 0.0);
  EXPECT_EQ(r.winding, 0);
  r = reduce_time(1.0 / (2 * pi));
  EXPECT_EQ(r.x, 0.0);
  EXPECT_EQ(r.winding, 1);
  r = reduce_time(2.5 / (2 * pi));
  EXPECT_EQ(r.x, 0.5);
  EXPECT_EQ(r.winding, 2);
}

TEST(ReduceTime, QuasiPeriodicReconstruction) {
  const double tol = 1e-7;
  for (double t : {0.93, -0.41, 2.2}) {
    const auto r = reduce_time(t);
    const cd lhs = eval_phi(t, tol).value;
    const cd rhs = eval_phi(TimePoint::from_x(r.x), tol).value +
                   cd(0, static_cast<double>(r.winding) / (2 * pi));
    EXPECT_LE(std::abs(lhs - rhs), 2 * tol + 1e-12) << t;
  }
}
