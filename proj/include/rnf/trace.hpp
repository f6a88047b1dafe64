#pragma once

// Sampled images of phi over x in [x_lo, x_hi] (t = x / (2 pi)).
//
// On a grid x_j = j / M the truncated series is a discrete Fourier transform:
//
//   sum_{k<=N} exp(-2 pi i k^2 j / M) / k^2 = sum_{r mod M} c_r exp(-2 pi i r j / M),
//   c_r = sum_{k<=N, k^2 = r (mod M)} 1 / k^2,
//
// so binning the N weights once and a single length-M FFT give every grid value.

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include <fftw3.h>

#include "rnf/error.hpp"
#include "rnf/series.hpp"

namespace rnf {

struct Polyline {
  std::vector<double> x;
  std::vector<ComplexPoint> points;
  double certified_tol = 0.0;

  std::size_t size() const { return points.size(); }
};

namespace detail {

/// If (x_hi - x_lo) / (n - 1) = 1/M and x_lo = j0/M for integers, returns M and sets j0.
inline std::optional<std::int64_t> uniform_grid_denominator(double x_lo, double x_hi,
                                                            std::size_t n, std::int64_t& j0) {
  const double m = static_cast<double>(n - 1) / (x_hi - x_lo);
  const double mr = std::nearbyint(m);
  if (mr < 1.0 || mr > static_cast<double>(1 << 27) || std::fabs(m - mr) > 1e-9 * mr) {
    return std::nullopt;
  }
  const double jl = x_lo * mr;
  const double jr = std::nearbyint(jl);
  if (std::fabs(jl - jr) > 1e-9 * std::max(1.0, mr)) return std::nullopt;
  j0 = static_cast<std::int64_t>(jr);
  return static_cast<std::int64_t>(mr);
}

struct FftwPlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};

/// sum_{k<=N} exp(-2 pi i k^2 j / M) / k^2 for j = 0 .. M-1, and the Basel partial sum.
inline std::vector<ComplexPoint> quadratic_sums_on_grid(std::int64_t m, std::uint64_t n_terms,
                                                        double& basel) {
  const auto mu = static_cast<std::uint64_t>(m);
  std::vector<double> bins(mu, 0.0);
  CompensatedSum b;
  // descending k adds small weights first
  for (std::uint64_t k = n_terms; k >= 1; --k) {
    const double w = 1.0 / (static_cast<double>(k) * static_cast<double>(k));
    const std::uint64_t kr = k % mu;
    bins[static_cast<std::size_t>(kr * kr % mu)] += w;
    b.add(w);
  }
  basel = b.value();
  std::vector<ComplexPoint> out(mu);
  auto* in = reinterpret_cast<fftw_complex*>(out.data());
  for (std::uint64_t r = 0; r < mu; ++r) out[r] = {bins[r], 0.0};
  const std::unique_ptr<fftw_plan_s, FftwPlanDeleter> plan(
      fftw_plan_dft_1d(static_cast<int>(m), in, in, FFTW_FORWARD, FFTW_ESTIMATE));
  fftw_execute(plan.get());
  return out;
}

}  // namespace detail

/// n uniformly spaced samples of phi(x / (2 pi)) for x in [x_lo, x_hi], each within tol.
inline Polyline trace_image(double x_lo, double x_hi, std::size_t n, double tol,
                            const SeriesConfig& cfg = {}) {
  detail::require_tolerance(tol);
  require(0.0 <= x_lo && x_lo < x_hi && x_hi <= 1.0, ErrorCode::invalid_argument,
          "need 0 <= x_lo < x_hi <= 1");
  require(n >= 2, ErrorCode::invalid_argument, "need n >= 2");
  Polyline poly;
  poly.x.resize(n);
  poly.points.resize(n);
  std::int64_t j0 = 0;
  const auto m = detail::uniform_grid_denominator(x_lo, x_hi, n, j0);
  if (!m) {
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = j + 1 == n ? x_hi
                                  : x_lo + (x_hi - x_lo) * static_cast<double>(j) /
                                               static_cast<double>(n - 1);
      const EvalResult r = eval_phi(TimePoint::from_x(x), tol, cfg);
      poly.x[j] = x;
      poly.points[j] = r.value;
      worst = std::max(worst, r.tail_bound);
    }
    poly.certified_tol = worst;
    return poly;
  }
  const std::uint64_t n_terms = detail::terms_for(1.0 / (kPi * kPi), tol, cfg);
  double basel = 0.0;
  const auto sums = detail::quadratic_sums_on_grid(*m, n_terms, basel);
  const double scale = 1.0 / (2.0 * kPi * kPi);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t j = j0 + static_cast<std::int64_t>(i);
    const std::size_t r = static_cast<std::size_t>(j % *m);
    const double x = static_cast<double>(j) / static_cast<double>(*m);
    poly.x[i] = x;
    poly.points[i] = ComplexPoint{0.0, x / kTwoPi} + (basel - sums[r]) * scale;
  }
  poly.certified_tol = 1.0 / (kPi * kPi * static_cast<double>(n_terms));
  return poly;
}

/// Largest distance between consecutive samples.
inline double max_gap(const Polyline& poly) {
  double g = 0.0;
  for (std::size_t i = 1; i < poly.size(); ++i) g = std::max(g, std::abs(poly.points[i] - poly.points[i - 1]));
  return g;
}

}  // namespace rnf
