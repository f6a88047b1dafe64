#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <unordered_set>
#include <vector>

#include "rnf/error.hpp"
#include "rnf/trace.hpp"

namespace rnf {

struct BoxCountResult {
  std::vector<double> scales;  // the usable scales, decreasing
  std::vector<std::uint64_t> counts;
  double slope = 0.0;
  double fit_r2 = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

/// Longer side of the bounding box; within a factor sqrt(2) of the diameter.
inline double bounding_extent(const Polyline& poly) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& p : poly.points) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  return std::max(xmax - xmin, ymax - ymin);
}

inline double min_positive_gap(const Polyline& poly) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < poly.size(); ++i) {
    const double d = std::abs(poly.points[i] - poly.points[i - 1]);
    if (d > 0) g = std::min(g, d);
  }
  return g;
}

/// Occupied boxes of side s of a grid anchored at `offset`, segments rasterized at steps <= s/2.
inline std::uint64_t occupied_boxes(const Polyline& poly, double s, ComplexPoint offset = {}) {
  std::unordered_set<std::uint64_t> boxes;
  auto mark = [&](ComplexPoint p) {
    const auto i = static_cast<std::int64_t>(std::floor((p.real() - offset.real()) / s));
    const auto j = static_cast<std::int64_t>(std::floor((p.imag() - offset.imag()) / s));
    boxes.insert((static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
                 static_cast<std::uint32_t>(j));
  };
  if (poly.size() == 1) mark(poly.points[0]);
  for (std::size_t i = 1; i < poly.size(); ++i) {
    const ComplexPoint a = poly.points[i - 1];
    const ComplexPoint b = poly.points[i];
    const auto steps = static_cast<std::uint64_t>(std::ceil(std::abs(b - a) / (0.5 * s)));
    for (std::uint64_t m = 0; m <= steps; ++m) {
      const double f = steps == 0 ? 0.0 : static_cast<double>(m) / static_cast<double>(steps);
      mark(a + f * (b - a));
    }
  }
  return boxes.size();
}

/// Box counts at the usable scales (within [10 * min gap, extent / 4]) and the fitted slope
/// of log count against log(1/scale).
inline BoxCountResult box_count(const Polyline& poly, const std::vector<double>& scales,
                                ComplexPoint offset = {}) {
  require(poly.size() >= 2, ErrorCode::invalid_argument, "polyline needs two samples");
  for (std::size_t i = 1; i < scales.size(); ++i) {
    require(scales[i] < scales[i - 1], ErrorCode::invalid_argument, "scales must decrease");
  }
  const double lo = 10.0 * min_positive_gap(poly);
  const double hi = bounding_extent(poly) / 4.0;
  BoxCountResult res;
  for (double s : scales) {
    require(s > 0, ErrorCode::invalid_argument, "scales must be positive");
    if (s >= lo && s <= hi) res.scales.push_back(s);
  }
  if (res.scales.size() < 3) {
    throw Error(ErrorCode::insufficient_scale_range,
                "only " + std::to_string(res.scales.size()) + " usable scales");
  }
  std::vector<double> lx, ly;
  for (double s : res.scales) {
    const std::uint64_t c = occupied_boxes(poly, s, offset);
    res.counts.push_back(c);
    lx.push_back(std::log(1.0 / s));
    ly.push_back(std::log(static_cast<double>(c)));
  }
  const LineFit f = least_squares(lx, ly);
  res.slope = f.slope;
  res.fit_r2 = f.r2;
  return res;
}

struct OffsetSpread {
  std::vector<double> slopes;  // anchored grid first, then the random offsets
  double spread = 0.0;         // max - min slope
};

/// Slopes for the origin-anchored grid and `n_offsets` random grid offsets from `seed`.
inline OffsetSpread box_count_offsets(const Polyline& poly, const std::vector<double>& scales,
                                      std::size_t n_offsets = 4, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  OffsetSpread out;
  out.slopes.push_back(box_count(poly, scales).slope);
  const double s0 = scales.front();
  for (std::size_t i = 0; i < n_offsets; ++i) {
    // 53-bit uniforms in [0, 1)
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    out.slopes.push_back(box_count(poly, scales, {u * s0, v * s0}).slope);
  }
  const auto [mn, mx] = std::minmax_element(out.slopes.begin(), out.slopes.end());
  out.spread = *mx - *mn;
  return out;
}

}  // namespace rnf
