#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace rnf {

/// Geodesic distance on the unit circle between the directions of a and b, in [0, pi].
inline double angular_distance(std::complex<double> a, std::complex<double> b) {
  return std::fabs(std::arg(b * std::conj(a)));
}

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
}

/// Unit vector with argument a.
inline std::complex<double> unit_at(double a) { return {std::cos(a), std::sin(a)}; }

/// Distance from the direction of z to the nearest e^{i pi m / 4}.
inline double eighth_root_distance(std::complex<double> z) {
  const double quarter = std::numbers::pi / 4.0;
  const double a = std::arg(z);
  return std::fabs(a - quarter * std::nearbyint(a / quarter));
}

/// Largest empty arc between the given directions; 2 pi for an empty set.
inline double max_circular_gap(const std::vector<std::complex<double>>& dirs) {
  if (dirs.empty()) return 2.0 * std::numbers::pi;
  std::vector<double> a;
  a.reserve(dirs.size());
  for (const auto& d : dirs) a.push_back(std::arg(d));
  std::sort(a.begin(), a.end());
  double gap = a.front() + 2.0 * std::numbers::pi - a.back();
  for (std::size_t i = 1; i < a.size(); ++i) gap = std::max(gap, a[i] - a[i - 1]);
  return gap;
}

/// Arc measure of the union of closed arcs of half-width r centred at the directions.
inline double covered_arc(const std::vector<std::complex<double>>& dirs, double r) {
  const double two_pi = 2.0 * std::numbers::pi;
  if (dirs.empty()) return 0.0;
  if (2.0 * r >= two_pi) return two_pi;
  std::vector<double> a;
  for (const auto& d : dirs) a.push_back(std::arg(d));
  std::sort(a.begin(), a.end());
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double next = i + 1 < a.size() ? a[i + 1] : a.front() + two_pi;
    total += std::min(next - a[i], 2.0 * r);
  }
  return std::min(total, two_pi);
}

/// Largest pairwise angular distance.
inline double max_pairwise_distance(const std::vector<std::complex<double>>& dirs) {
  double d = 0.0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    for (std::size_t j = i + 1; j < dirs.size(); ++j) d = std::max(d, angular_distance(dirs[i], dirs[j]));
  }
  return d;
}

}  // namespace rnf
