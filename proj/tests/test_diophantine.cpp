#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "rnf/continued_fraction.hpp"
#include "rnf/farey.hpp"
#include "rnf/rational.hpp"

using namespace rnf;

namespace {

// Euclid's algorithm on machine integers, independent of the library code.
std::vector<std::int64_t> euclid(std::int64_t p, std::int64_t q) {
  std::vector<std::int64_t> out;
  std::int64_t a0 = p / q;
  if ((p % q != 0) && (p < 0)) --a0;
  out.push_back(a0);
  p -= a0 * q;
  while (p != 0) {
    std::swap(p, q);
    out.push_back(p / q);
    p %= q;
  }
  return out;
}

// Totient by trial-division factorisation.
std::uint64_t totient_by_factoring(std::uint64_t n) {
  std::uint64_t result = n;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      while (n % f == 0) n /= f;
      result -= result / f;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

std::vector<std::int64_t> as_int(const std::vector<BigInt>& v) {
  std::vector<std::int64_t> out;
  for (const auto& a : v) out.push_back(a.convert_to<std::int64_t>());
  return out;
}

BigRational abs_error(const BigRational& rho, const Rational& c) {
  return boost::multiprecision::abs(rho - c.exact());
}

}  // namespace

TEST(MakeRational, ReducesAndClassifies) {
  auto r = make_rational(2, 4);
  EXPECT_EQ(r.p(), 1);
  EXPECT_EQ(r.q(), 2);
  EXPECT_EQ(r.mod4(), 2);
  r = make_rational(3, 9);
  EXPECT_EQ(r, Rational(1, 3));
  EXPECT_EQ(r.mod4(), 3);
  r = make_rational(0, 1);
  EXPECT_EQ(r.p(), 0);
  EXPECT_EQ(r.mod4(), 1);
  r = make_rational(3, -6);
  EXPECT_EQ(r, Rational(-1, 2));
}

TEST(MakeRational, ZeroDenominator) {
  try {
    (void)make_rational(1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::zero_denominator);
  }
}

TEST(CfExpand, TwentyThreeEighths) {
  const auto cf = cf_expand(Rational(23, 8));
  EXPECT_EQ(cf.a0(), 2);
  EXPECT_EQ(as_int(cf.prefix()), (std::vector<std::int64_t>{1, 7}));
  EXPECT_TRUE(cf.terminates());
  EXPECT_EQ(as_int(cf.terms(10)), euclid(23, 8));
}

TEST(CfExpand, QuadraticIrrationalGenerators) {
  EXPECT_EQ(as_int(golden_ratio_cf().terms(6)), (std::vector<std::int64_t>{1, 1, 1, 1, 1, 1}));
  EXPECT_EQ(as_int(sqrt2_cf().terms(6)), (std::vector<std::int64_t>{1, 2, 2, 2, 2, 2}));
  EXPECT_EQ(cf_expand(sqrt2_cf(), 10).known_terms(), CFExpansion::unbounded);
}

TEST(CfExpand, MatchesEuclidOracleOnRandomRationals) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> up(-1000000000, 1000000000);
  std::uniform_int_distribution<std::int64_t> uq(1, 1000000000);
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t p = up(rng), q = uq(rng);
    const Rational r(p, q);
    const auto cf = cf_expand(r);
    const auto want = euclid(r.p64(), r.q64());
    ASSERT_EQ(as_int(cf.terms(want.size() + 1)), want) << p << "/" << q;
    if (want.size() > 1) EXPECT_GE(want.back(), 2);
    const auto conv = convergents(cf, cf.known_terms());
    EXPECT_EQ(conv.back().frac, r);
  }
}

TEST(CfExpand, FloatingInputStopsAtFirstUncertifiedQuotient) {
  // pi = [3; 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, ...]
  const auto cf = cf_expand(3.141592653589793, 1e-15, 50);
  EXPECT_EQ(cf.source(), CFSource::floating);
  const auto t = as_int(cf.terms(50));
  const std::vector<std::int64_t> pi_cf{3, 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14};
  ASSERT_GE(t.size(), 8u);
  ASSERT_LE(t.size(), pi_cf.size());
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(t[i], pi_cf[i]) << i;
  // a wide budget certifies less
  EXPECT_LT(cf_expand(3.141592653589793, 1e-4, 50).terms(50).size(), t.size());
  try {
    (void)convergents(cf, t.size() + 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::insufficient_precision);
  }
}

TEST(CfExpand, MaxTermsTruncates) {
  const auto cf = cf_expand(Rational(355, 113), 2);
  EXPECT_EQ(cf.terms(10).size(), 2u);
  EXPECT_FALSE(cf.terminates());
  EXPECT_THROW(cf_expand(Rational(1, 2), 0), Error);
}

TEST(Convergents, GoldenConjugateGivesFibonacciRatios) {
  const auto conv = convergents(golden_conjugate_cf(), 6);
  const std::vector<std::pair<int, int>> want{{0, 1}, {1, 1}, {1, 2}, {2, 3}, {3, 5}, {5, 8}};
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(conv[i].frac, Rational(want[i].first, want[i].second));
  }
}

TEST(Convergents, ClassicalBoundsSandwichAndAlternation) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> ua(1, 50);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<BigInt> prefix;
    for (int i = 0; i < 30; ++i) prefix.push_back(ua(rng));
    const auto gen = CFExpansion::periodic(0, prefix, {1, 2});
    // the irrational itself, approximated far beyond every checked convergent
    const auto deep = convergents(gen, 120).back().frac.exact();
    const auto conv = convergents(gen, 40);
    for (std::size_t n = 0; n + 1 < conv.size(); ++n) {
      const BigInt& q = conv[n].frac.q();
      const BigInt& q1 = conv[n + 1].frac.q();
      const BigRational err = abs_error(deep, conv[n].frac);
      EXPECT_LT(err, BigRational(1, q * q));
      EXPECT_LT(BigRational(1, q * (q1 + q)), err);
      EXPECT_LT(err, BigRational(1, q * q1));
      const BigRational signed_err = deep - conv[n].frac.exact();
      EXPECT_EQ(signed_err > 0, n % 2 == 0);
      if (n >= 1) {
        EXPECT_LT(conv[n - 1].frac.q(), q);
        ASSERT_TRUE(conv[n].gamma.has_value());
        EXPECT_GT(conv[n].gamma_lo, 2.0);
        // the interval contains the exponent computed from the deep approximation
        const double le = log_big(boost::multiprecision::numerator(err)) -
                          log_big(boost::multiprecision::denominator(err));
        const double g = -le / log_big(q);
        EXPECT_LE(conv[n].gamma_lo, g + 1e-12);
        EXPECT_GE(conv[n].gamma_hi, g - 1e-12);
      }
    }
  }
}

TEST(Convergents, RationalInputHasExactExponentsAndUndefinedLast) {
  const auto cf = cf_expand(Rational(1393, 985));
  const auto conv = convergents(cf, cf.known_terms());
  EXPECT_FALSE(conv.back().gamma.has_value());
  for (std::size_t n = 1; n + 1 < conv.size(); ++n) {
    ASSERT_TRUE(conv[n].gamma.has_value());
    EXPECT_EQ(conv[n].gamma_lo, conv[n].gamma_hi);
    EXPECT_GT(*conv[n].gamma, 2.0);
  }
}

TEST(Convergents, PrescribedSquareQuotientsGiveGammaFour) {
  // a_{n+1} = q_n^2 at every index from 2 on: q_{n+1} ~ q_n^3 and gamma_n -> 4
  std::vector<BigInt> prefix{1, 1};
  BigInt q_prev2 = 1, q_prev = 2;  // q_1 = 1, q_2 = 2 for [0; 1, 1, ...]
  for (int i = 0; i < 5; ++i) {
    const BigInt a = q_prev * q_prev;
    prefix.push_back(a);
    const BigInt q = a * q_prev + q_prev2;
    q_prev2 = q_prev;
    q_prev = q;
  }
  const auto gen = CFExpansion::periodic(0, prefix, {1});
  const auto conv = convergents(gen, 7);
  const auto deep = convergents(gen, 40).back().frac.exact();
  for (std::size_t n = 4; n < 7; ++n) {
    const BigRational err = abs_error(deep, conv[n].frac);
    const double g = -(log_big(boost::multiprecision::numerator(err)) -
                       log_big(boost::multiprecision::denominator(err))) /
                     log_big(conv[n].frac.q());
    EXPECT_NEAR(g, 4.0, 0.05) << n;
    EXPECT_NEAR(*conv[n].gamma, g, 1e-9) << n;
  }
}

TEST(GammaLimsup, GoldenEstimateApproachesTwo) {
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t depth : {10, 20, 40, 80, 160}) {
    const auto est = gamma_limsup(golden_conjugate_cf(), depth);
    EXPECT_GT(est.gamma, 2.0);
    EXPECT_LT(est.gamma, prev);
    prev = est.gamma;
    EXPECT_EQ(est.window_end, depth);
    // |rho - p/q| ~ 1/(sqrt(5) q^2), so gamma_n - 2 ~ log(sqrt 5) / log q_n
    const auto conv = convergents(golden_conjugate_cf(), depth);
    const double lq = log_big(conv[est.argmax_n].frac.q());
    EXPECT_NEAR(est.gamma, 2.0 + std::log(std::sqrt(5.0)) / lq, 0.1 / lq) << depth;
  }
  EXPECT_LT(prev - 2.0, 0.025);
}

TEST(GammaLimsup, PrescribedTargetFour) {
  const auto tgt = make_exponent_target(4.0);
  EXPECT_DOUBLE_EQ(tgt.target_alpha, 0.625);
  EXPECT_FALSE(tgt.boosted.empty());
  const auto est = gamma_limsup(tgt.rho, 20);
  EXPECT_NEAR(est.gamma, 4.0, 0.2);
}

TEST(GammaLimsup, RationalInputIsRejected) {
  try {
    (void)gamma_limsup(cf_expand(Rational(23, 8)), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::finite_expansion);
  }
}

TEST(GammaLimsup, NoAdmissibleDenominator) {
  // [0; 2, 1, 1, ...]: q = 1, 2, 3, ... the window [1, 2) holds only q_1 = 2
  const auto gen = CFExpansion::periodic(0, {2}, {1});
  try {
    (void)gamma_limsup(gen, 2, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::no_admissible_denominators);
  }
}

TEST(HolderExponent, Values) {
  EXPECT_DOUBLE_EQ(holder_exponent(2.0), 0.75);
  EXPECT_DOUBLE_EQ(holder_exponent(3.0), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(holder_exponent(std::numeric_limits<double>::infinity()), 0.5);
  try {
    (void)holder_exponent(1.9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::inadmissible_exponent);
  }
  double prev = 1.0;
  for (double g = 2.0; g < 50.0; g += 0.5) {
    const double a = holder_exponent(g);
    EXPECT_LT(a, prev);
    EXPECT_GT(a, 0.5);
    prev = a;
  }
}

TEST(Farey, SmallRange) {
  const auto f = farey_enumerate(2, 3);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], Rational(1, 2));
  EXPECT_EQ(f[1], Rational(1, 3));
  EXPECT_EQ(f[2], Rational(2, 3));
}

TEST(Farey, CountsMatchTotientOracle) {
  EXPECT_EQ(farey_enumerate(5, 5).size(), 4u);
  std::uint64_t total = 0;
  for (std::uint64_t q = 2; q <= 100; ++q) total += totient_by_factoring(q);
  EXPECT_EQ(farey_enumerate(2, 100).size(), total);
  EXPECT_EQ(farey_count(2, 100), total);
  const auto phi = totients_upto(5000);
  for (std::uint64_t q = 1; q <= 5000; ++q) ASSERT_EQ(phi[q], totient_by_factoring(q)) << q;
  for (const auto& r : farey_enumerate(2, 60)) {
    EXPECT_GE(r.p(), 1);
    EXPECT_LT(r.p(), r.q());
  }
}
