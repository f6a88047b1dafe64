#pragma once

// Continued fractions, convergents and approximation exponents.
//
// For a convergent p_n/q_n of rho the exponent gamma_n is defined by
// |rho - p_n/q_n| = q_n^(-gamma_n). For an infinite expansion the error is
//
//   |rho - p_n/q_n| = 1 / (q_n (q_{n+1} + q_n / alpha_{n+2})),
//
// where alpha_{n+2} = [a_{n+2}; a_{n+3}, ...] is the complete quotient, which
// the known partial quotients bracket. gamma_n is therefore reported as an
// interval, degenerate for exact rational inputs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rnf/error.hpp"
#include "rnf/rational.hpp"

namespace rnf {

enum class CFSource { exact, floating, generator };

inline std::string_view to_string(CFSource s) {
  switch (s) {
    case CFSource::exact: return "exact";
    case CFSource::floating: return "floating";
    case CFSource::generator: return "generator";
  }
  return "unknown";
}

/// [a0; a1, a2, ...], either finite or a finite prefix followed by a repeating period.
class CFExpansion {
 public:
  static constexpr std::size_t unbounded = std::numeric_limits<std::size_t>::max();

  static CFExpansion finite(BigInt a0, std::vector<BigInt> quotients, CFSource source,
                            bool complete, double error_budget = 0.0) {
    for (const auto& a : quotients) {
      require(a >= 1, ErrorCode::invalid_argument, "partial quotients must be positive");
    }
    CFExpansion cf;
    cf.a0_ = std::move(a0);
    cf.prefix_ = std::move(quotients);
    cf.source_ = source;
    cf.complete_ = complete;
    cf.error_budget_ = error_budget;
    return cf;
  }

  /// Quadratic irrationals and other exactly known infinite expansions.
  static CFExpansion periodic(BigInt a0, std::vector<BigInt> prefix, std::vector<BigInt> period) {
    require(!period.empty(), ErrorCode::invalid_argument, "period must be non-empty");
    CFExpansion cf = finite(std::move(a0), std::move(prefix), CFSource::generator, false);
    for (const auto& a : period) {
      require(a >= 1, ErrorCode::invalid_argument, "partial quotients must be positive");
    }
    cf.period_ = std::move(period);
    return cf;
  }

  /// Floating expansions: the centre x of the certified interval [x - budget, x + budget].
  static CFExpansion floating(BigInt a0, std::vector<BigInt> quotients, double center,
                              double error_budget) {
    CFExpansion cf = finite(std::move(a0), std::move(quotients), CFSource::floating, false,
                            error_budget);
    cf.center_ = center;
    return cf;
  }

  const BigInt& a0() const { return a0_; }
  std::optional<double> center() const { return center_; }
  const std::vector<BigInt>& prefix() const { return prefix_; }
  const std::vector<BigInt>& period() const { return period_; }
  CFSource source() const { return source_; }
  double error_budget() const { return error_budget_; }

  bool is_infinite() const { return !period_.empty(); }
  /// Finite expansion of an exactly known rational, with every quotient present.
  bool terminates() const { return source_ == CFSource::exact && complete_; }

  /// Number of known terms a0, a1, ...; unbounded for periodic generators.
  std::size_t known_terms() const { return is_infinite() ? unbounded : prefix_.size() + 1; }

  /// a_n, n = 0 giving a0; nullopt past the known terms.
  std::optional<BigInt> quotient(std::size_t n) const {
    if (n == 0) return a0_;
    if (n - 1 < prefix_.size()) return prefix_[n - 1];
    if (!is_infinite()) return std::nullopt;
    return period_[(n - 1 - prefix_.size()) % period_.size()];
  }

  /// The first `count` terms a0, a1, ... (fewer if the expansion is shorter).
  std::vector<BigInt> terms(std::size_t count) const {
    std::vector<BigInt> out;
    for (std::size_t n = 0; n < count; ++n) {
      auto a = quotient(n);
      if (!a) break;
      out.push_back(std::move(*a));
    }
    return out;
  }

 private:
  BigInt a0_;
  std::vector<BigInt> prefix_;
  std::vector<BigInt> period_;
  CFSource source_ = CFSource::exact;
  bool complete_ = true;
  double error_budget_ = 0.0;
  std::optional<double> center_;
};

inline CFExpansion golden_ratio_cf() { return CFExpansion::periodic(1, {}, {1}); }
inline CFExpansion golden_conjugate_cf() { return CFExpansion::periodic(0, {}, {1}); }
inline CFExpansion sqrt2_cf() { return CFExpansion::periodic(1, {}, {2}); }

namespace detail {

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

inline BigInt floor_of(const BigRational& r) {
  return floor_div(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

}  // namespace detail

/// Euclid's algorithm; the result is canonical (last quotient >= 2 when there is more than a0).
inline CFExpansion cf_expand(const Rational& x, std::size_t max_terms = CFExpansion::unbounded) {
  require(max_terms >= 1, ErrorCode::invalid_argument, "max_terms must be >= 1");
  BigInt num = x.p();
  BigInt den = x.q();
  const BigInt a0 = detail::floor_div(num, den);
  num -= a0 * den;
  std::vector<BigInt> qs;
  bool complete = true;
  while (num != 0) {
    if (qs.size() + 1 >= max_terms) {
      complete = false;
      break;
    }
    std::swap(num, den);
    BigInt a = num / den;
    num -= a * den;
    qs.push_back(std::move(a));
  }
  return CFExpansion::finite(a0, std::move(qs), CFSource::exact, complete);
}

/// Expansion of every real in [x - budget, x + budget]: stops at the first quotient
/// that is not common to the whole interval.
inline CFExpansion cf_expand(double x, double error_budget, std::size_t max_terms) {
  require(max_terms >= 1, ErrorCode::invalid_argument, "max_terms must be >= 1");
  require(std::isfinite(x) && error_budget >= 0.0, ErrorCode::invalid_argument,
          "finite value and non-negative budget required");
  BigRational lo = BigRational(x) - BigRational(error_budget);
  BigRational hi = BigRational(x) + BigRational(error_budget);
  const BigInt a0 = detail::floor_of(lo);
  if (detail::floor_of(hi) != a0) {
    throw Error(ErrorCode::insufficient_precision, "error budget does not certify a0");
  }
  std::vector<BigInt> qs;
  bool complete = false;
  BigInt a = a0;
  while (qs.size() + 1 < max_terms) {
    const BigRational flo = lo - a;
    const BigRational fhi = hi - a;
    if (flo == 0 && fhi == 0) {
      complete = error_budget == 0.0;
      break;
    }
    if (flo <= 0) break;  // interval reaches the integer a: next quotient unbounded
    const BigRational nlo = 1 / fhi;
    const BigRational nhi = 1 / flo;
    const BigInt c = detail::floor_of(nlo);
    if (detail::floor_of(nhi) != c) break;
    qs.push_back(c);
    a = c;
    lo = nlo;
    hi = nhi;
  }
  if (error_budget == 0.0 && complete) {
    return CFExpansion::finite(a0, std::move(qs), CFSource::exact, true);
  }
  return CFExpansion::floating(a0, std::move(qs), x, error_budget);
}

/// A generator is already exact; returns it unchanged (max_terms only bounds materialization).
inline CFExpansion cf_expand(const CFExpansion& generator, std::size_t max_terms) {
  require(max_terms >= 1, ErrorCode::invalid_argument, "max_terms must be >= 1");
  return generator;
}

struct Convergent {
  Rational frac;
  std::size_t n = 0;
  /// Midpoint estimate of gamma_n; nullopt when undefined (q_n = 1 or zero error).
  std::optional<double> gamma;
  double gamma_lo = std::numeric_limits<double>::quiet_NaN();
  double gamma_hi = std::numeric_limits<double>::quiet_NaN();
  /// Bounds on ln |rho - p_n/q_n|.
  double log_error_lo = -std::numeric_limits<double>::infinity();
  double log_error_hi = -std::numeric_limits<double>::infinity();
};

namespace detail {

// ln(q_{n+1} + q_n / alpha) for alpha in [alpha_lo, alpha_hi] (alpha_hi may be +inf).
inline std::pair<double, double> log_denominator_bracket(const BigInt& qn, const BigInt& qn1,
                                                         double alpha_lo, double alpha_hi) {
  const double lq1 = log_big(qn1);
  const double ratio = ratio_big(qn, qn1);
  const double lo = lq1 + std::log1p(std::isinf(alpha_hi) ? 0.0 : ratio / alpha_hi);
  const double hi = lq1 + std::log1p(ratio / alpha_lo);
  return {lo, hi};
}

inline double quotient_as_double(const BigInt& a) {
  const double l = log_big(a);
  return l > 700.0 ? std::numeric_limits<double>::infinity() : a.convert_to<double>();
}

}  // namespace detail

/// Convergents p_n/q_n for n = 0 .. depth-1 with their approximation exponents.
inline std::vector<Convergent> convergents(const CFExpansion& cf, std::size_t depth) {
  if (depth > cf.known_terms()) {
    throw Error(ErrorCode::insufficient_precision,
                "depth " + std::to_string(depth) + " exceeds " + std::to_string(cf.known_terms()) +
                    " certified quotients");
  }
  std::vector<Convergent> out;
  out.reserve(depth);
  // p_{-1} = 1, q_{-1} = 0, p_{-2} = 0, q_{-2} = 1
  BigInt p_prev2 = 0, q_prev2 = 1, p_prev = 1, q_prev = 0;
  std::vector<BigInt> ps;
  std::vector<BigInt> qs;
  const std::size_t need = std::min(cf.known_terms(), depth + 2);
  for (std::size_t n = 0; n < need; ++n) {
    const BigInt a = *cf.quotient(n);
    BigInt p = a * p_prev + p_prev2;
    BigInt q = a * q_prev + q_prev2;
    p_prev2 = std::move(p_prev);
    q_prev2 = std::move(q_prev);
    p_prev = p;
    q_prev = q;
    ps.push_back(std::move(p));
    qs.push_back(std::move(q));
  }
  std::optional<BigRational> exact_value;
  if (cf.terminates()) exact_value = BigRational(ps.back(), qs.back());

  for (std::size_t n = 0; n < depth; ++n) {
    Convergent c;
    c.frac = Rational(ps[n], qs[n]);
    c.n = n;
    const BigInt& qn = qs[n];
    if (exact_value) {
      const BigRational err = boost::multiprecision::abs(*exact_value - c.frac.exact());
      if (err != 0) {
        const double le = log_big(boost::multiprecision::numerator(err)) -
                          log_big(boost::multiprecision::denominator(err));
        c.log_error_lo = c.log_error_hi = le;
        if (qn > 1) {
          c.gamma = -le / log_big(qn);
          c.gamma_lo = c.gamma_hi = *c.gamma;
        }
      }
    } else if (n + 1 < qs.size()) {
      // alpha_{n+2} is bracketed by a_{n+2} when known, else only alpha >= 1
      double alpha_lo = 1.0;
      double alpha_hi = std::numeric_limits<double>::infinity();
      if (auto a2 = cf.quotient(n + 2)) {
        alpha_lo = detail::quotient_as_double(*a2);
        alpha_hi = alpha_lo + 1.0;
      }
      const auto [ld_lo, ld_hi] = detail::log_denominator_bracket(qn, qs[n + 1], alpha_lo, alpha_hi);
      const double lq = log_big(qn);
      c.log_error_hi = -(lq + ld_lo);
      c.log_error_lo = -(lq + ld_hi);
      if (qn > 1) {
        c.gamma_lo = -c.log_error_hi / lq;
        c.gamma_hi = -c.log_error_lo / lq;
        c.gamma = 0.5 * (c.gamma_lo + c.gamma_hi);
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

struct GammaEstimate {
  double gamma = 0.0;
  std::size_t window_begin = 0;
  std::size_t window_end = 0;
  std::size_t admissible = 0;
  std::size_t argmax_n = 0;
};

inline bool admissible_denominator(const BigInt& q) {
  const int r = static_cast<int>(q % 4);
  return r == 0 || r == 1 || r == 3;
}

/// Windowed maximum of gamma_n over n in the last `window_fraction` of [0, depth),
/// restricted to q_n = 0, 1, 3 (mod 4). An estimate of the limsup, not the limsup.
inline GammaEstimate gamma_limsup(const CFExpansion& cf, std::size_t depth,
                                  double window_fraction = 0.5) {
  if (cf.terminates()) throw Error(ErrorCode::finite_expansion, "rational input");
  require(window_fraction > 0.0 && window_fraction <= 1.0, ErrorCode::invalid_argument,
          "window fraction must lie in (0, 1]");
  const auto conv = convergents(cf, depth);
  GammaEstimate est;
  est.window_end = depth;
  est.window_begin =
      depth - static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(depth)));
  bool found = false;
  for (std::size_t n = est.window_begin; n < depth; ++n) {
    const Convergent& c = conv[n];
    if (!c.gamma || !admissible_denominator(c.frac.q())) continue;
    ++est.admissible;
    if (!found || *c.gamma > est.gamma) {
      est.gamma = *c.gamma;
      est.argmax_n = n;
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorCode::no_admissible_denominators,
                "no convergent with q = 0, 1, 3 (mod 4) in the window");
  }
  return est;
}

/// 1/2 + 1/(2 gamma) for gamma in [2, +inf].
inline double holder_exponent(double gamma) {
  require(!std::isnan(gamma) && gamma >= 2.0, ErrorCode::inadmissible_exponent,
          "gamma must be >= 2");
  if (std::isinf(gamma)) return 0.5;
  return 0.5 + 0.5 / gamma;
}

struct ExponentTarget {
  CFExpansion rho;
  double target_gamma = 2.0;
  double target_alpha = 0.75;
  std::vector<std::size_t> boosted;  // convergent indices n whose a_{n+1} was enlarged
};

/// rho in (0, 1) with a_{n+1} = round(q_n^(gamma - 2)) at admissible indices n spaced
/// `spacing` apart and a_k = 1 elsewhere (then 1 forever). The achieved gamma_n at the
/// boosted indices is close to, not exactly, the target.
inline ExponentTarget make_exponent_target(double target_gamma, std::size_t n_quotients = 40,
                                           std::size_t spacing = 4) {
  require(std::isfinite(target_gamma) && target_gamma >= 2.0, ErrorCode::inadmissible_exponent,
          "target gamma must be finite and >= 2");
  require(spacing >= 1, ErrorCode::invalid_argument, "spacing must be >= 1");
  ExponentTarget tgt;
  tgt.target_gamma = target_gamma;
  tgt.target_alpha = holder_exponent(target_gamma);
  std::vector<BigInt> qs_list;
  BigInt q_prev2 = 1, q_prev = 0;  // q_{-2}, q_{-1}
  // n = 0: a0 = 0 gives q_0 = 1
  BigInt q = 0 * q_prev + q_prev2;
  q_prev2 = q_prev;
  q_prev = q;
  std::size_t last_boost = 0;
  bool boosted_any = false;
  for (std::size_t n = 0; n + 1 <= n_quotients; ++n) {
    // choose a_{n+1} from q_n
    BigInt a = 1;
    const bool due = !boosted_any ? n + 1 >= spacing : n - last_boost >= spacing;
    if (target_gamma > 2.0 && due && q_prev > 1 && admissible_denominator(q_prev)) {
      a = big_from_log((target_gamma - 2.0) * log_big(q_prev));
      if (a < 1) a = 1;
      tgt.boosted.push_back(n);
      last_boost = n;
      boosted_any = true;
    }
    BigInt q_next = a * q_prev + q_prev2;
    q_prev2 = q_prev;
    q_prev = q_next;
    qs_list.push_back(std::move(a));
  }
  tgt.rho = CFExpansion::periodic(0, std::move(qs_list), {1});
  return tgt;
}

}  // namespace rnf
