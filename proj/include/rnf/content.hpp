#pragma once

// 1-Hausdorff content of curve pieces and the double-cone tangent test.
//
// For a connected set the 1-Hausdorff content equals its diameter, so the
// content of a union of connected fragments is bounded by the sum of the
// fragment diameters; that sum is what h1_content returns.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "rnf/angles.hpp"
#include "rnf/error.hpp"
#include "rnf/series.hpp"
#include "rnf/trace.hpp"

namespace rnf {

using Fragment = std::vector<ComplexPoint>;

namespace detail {

inline double cross(ComplexPoint o, ComplexPoint a, ComplexPoint b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

/// Convex hull by Andrew's monotone chain, counter-clockwise without repeated points.
inline std::vector<ComplexPoint> convex_hull(std::vector<ComplexPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](ComplexPoint a, ComplexPoint b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<ComplexPoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace detail

/// Euclidean diameter of a finite point set (0 for fewer than two points).
inline double diameter(const Fragment& pts) {
  const auto hull = detail::convex_hull(pts);
  double d = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    for (std::size_t j = i + 1; j < hull.size(); ++j) d = std::max(d, std::abs(hull[i] - hull[j]));
  }
  return d;
}

/// Sum of fragment diameters.
inline double h1_content(const std::vector<Fragment>& pieces) {
  double total = 0.0;
  for (const auto& f : pieces) total += diameter(f);
  return total;
}

/// Closed double cone {p : angle between p - vertex and +-direction <= opening / 2}.
struct Cone {
  ComplexPoint vertex;
  ComplexPoint direction{1.0, 0.0};
  double opening = std::numbers::pi / 9.0;

  Cone(ComplexPoint v, ComplexPoint dir, double open) : vertex(v), direction(dir), opening(open) {
    require(std::abs(dir) > 0, ErrorCode::invalid_argument, "cone direction must be nonzero");
    require(open > 0 && open < std::numbers::pi, ErrorCode::invalid_argument,
            "opening must lie in (0, pi)");
    direction = dir / std::abs(dir);
  }

  bool contains(ComplexPoint p) const {
    const ComplexPoint d = p - vertex;
    if (d == ComplexPoint{}) return true;
    const double a = std::fabs(std::arg(d * std::conj(direction)));
    return std::min(a, std::numbers::pi - a) <= 0.5 * opening;
  }
};

struct ConeRatio {
  double h = 0.0;
  double ratio = 0.0;
  std::size_t fragments = 0;
};

struct ConeTestResult {
  std::vector<ConeRatio> ratios;
  bool rejected = false;  // every ratio stayed at or above the floor
};

inline constexpr double kConeRatioFloor = 0.05;

/// Maximal runs of consecutive samples inside the ball B(centre, h) and outside the cone.
inline std::vector<Fragment> cone_fragments(const std::vector<ComplexPoint>& pts, const Cone& cone,
                                            double h) {
  std::vector<Fragment> out;
  Fragment cur;
  for (const auto& p : pts) {
    if (std::abs(p - cone.vertex) <= h && !cone.contains(p)) {
      cur.push_back(p);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

/// Ratio of content outside the cone to h for a curve given as point sequences (its pieces).
inline ConeTestResult cone_ratios(const std::vector<std::vector<ComplexPoint>>& curves,
                                  const Cone& cone, const std::vector<double>& h_list,
                                  double floor = kConeRatioFloor) {
  require(!h_list.empty(), ErrorCode::invalid_argument, "h_list must be non-empty");
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    require(h_list[i] > 0 && (i == 0 || h_list[i] < h_list[i - 1]), ErrorCode::invalid_argument,
            "h_list must be positive and decreasing");
  }
  const double h_min = h_list.back();
  for (const auto& pts : curves) {
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const bool near = std::abs(pts[i] - cone.vertex) <= h_list.front() ||
                        std::abs(pts[i - 1] - cone.vertex) <= h_list.front();
      if (near && std::abs(pts[i] - pts[i - 1]) >= h_min / 20.0) {
        throw Error(ErrorCode::refine_trace, "consecutive gap " +
                                                 std::to_string(std::abs(pts[i] - pts[i - 1])) +
                                                 " near the vertex exceeds h_min / 20");
      }
    }
  }
  ConeTestResult res;
  res.rejected = true;
  for (double h : h_list) {
    ConeRatio r;
    r.h = h;
    double content = 0.0;
    for (const auto& pts : curves) {
      const auto frags = cone_fragments(pts, cone, h);
      r.fragments += frags.size();
      content += h1_content(frags);
    }
    r.ratio = content / h;
    res.ratios.push_back(r);
    if (r.ratio < floor) res.rejected = false;
  }
  return res;
}

/// Cone test for phi at x0 using a trace of x in [0, 1]; phi(R) near the vertex is covered by
/// the translates trace + i m / (2 pi), |m| <= 2.
inline ConeTestResult cone_tangent_ratio(const TimePoint& x0, ComplexPoint cone_dir, double opening,
                                         const std::vector<double>& h_list, const Polyline& poly,
                                         double floor = kConeRatioFloor,
                                         const SeriesConfig& cfg = {}) {
  require(poly.size() >= 2, ErrorCode::invalid_argument, "polyline needs two samples");
  require(h_list.front() < 0.1, ErrorCode::invalid_argument, "h must stay below 0.1");
  const double tol = std::max(poly.certified_tol, 1e-10);
  const ComplexPoint vertex = eval_phi(x0, tol, cfg).value;
  // only runs of samples within 2 h_max of the vertex can meet a ball
  const double reach = 2.0 * h_list.front();
  std::vector<std::vector<ComplexPoint>> curves;
  for (int m = -2; m <= 2; ++m) {
    const ComplexPoint shift{0.0, static_cast<double>(m) / kTwoPi};
    std::vector<ComplexPoint> run;
    for (const auto& p0 : poly.points) {
      const ComplexPoint p = p0 + shift;
      if (std::abs(p - vertex) <= reach) {
        run.push_back(p);
      } else if (!run.empty()) {
        curves.push_back(std::move(run));
        run.clear();
      }
    }
    if (!run.empty()) curves.push_back(std::move(run));
  }
  return cone_ratios(curves, Cone(vertex, cone_dir, opening), h_list, floor);
}

}  // namespace rnf
