#pragma once

// Inner loops for sums of exp(2 pi i k^2 c) / k^2.
//
// Terms are generated by the recurrences
//   z_{k+L} = z_k * w_k,    w_{k+L} = w_k * r,    r = exp(2 pi i 2 L^2 c),
// on L interleaved lanes, re-anchored from exactly reduced phases at the start
// of every block of kBlock terms. The drift inside a block is O(steps^2 eps)
// relative, which the 1/k^2 weights make negligible.
//
// The k range is split into fixed chunks whose partial sums are combined in
// ascending order, so the result does not depend on the number of threads.

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "rnf/compensated.hpp"
#include "rnf/phase.hpp"

namespace rnf::detail {

inline constexpr std::uint64_t kLanes = 8;
inline constexpr std::uint64_t kBlock = 8192;
inline constexpr std::uint64_t kInner = 16;
inline constexpr std::uint64_t kChunk = kBlock * 64;

using LaneArray = std::array<double, kLanes>;

struct LaneKahan {
  LaneArray sum{};
  LaneArray carry{};

  void add(std::uint64_t j, double v) {
    const double y = v - carry[j];
    const double t = sum[j] + y;
    carry[j] = (t - sum[j]) - y;
    sum[j] = t;
  }

  void flush_into(CompensatedSum& acc) const {
    for (std::uint64_t j = 0; j < kLanes; ++j) {
      acc.add(sum[j]);
      acc.add(-carry[j]);
    }
  }
};

struct LaneComplex {
  LaneArray re{};
  LaneArray im{};
};

inline void anchor_stream(const QuadraticPhase& ph, std::uint64_t k0, LaneComplex& z,
                          LaneComplex& w) {
  for (std::uint64_t j = 0; j < kLanes; ++j) {
    const std::uint64_t k = k0 + j;
    const ComplexPoint zk = cis_turns(ph.turns_square(k));
    const ComplexPoint wk = cis_turns(ph.turns_linear(2 * k * kLanes + kLanes * kLanes));
    z.re[j] = zk.real();
    z.im[j] = zk.imag();
    w.re[j] = wk.real();
    w.im[j] = wk.imag();
  }
}

inline void anchor_stream_minus_one(const QuadraticPhase& ph, std::uint64_t k0, LaneComplex& em1,
                                    LaneComplex& wm1) {
  for (std::uint64_t j = 0; j < kLanes; ++j) {
    const std::uint64_t k = k0 + j;
    const ComplexPoint e = cis_turns_minus_one(ph.turns_square(k));
    const ComplexPoint w = cis_turns_minus_one(ph.turns_linear(2 * k * kLanes + kLanes * kLanes));
    em1.re[j] = e.real();
    em1.im[j] = e.imag();
    wm1.re[j] = w.real();
    wm1.im[j] = w.imag();
  }
}

/// Sums of a chunk: sum z_k / k^2 and sum 1 / k^2 over k in [k_begin, k_end).
struct QuadraticPartial {
  std::complex<double> oscillatory;
  double basel = 0.0;
};

inline QuadraticPartial quadratic_chunk(const QuadraticPhase& ph, std::uint64_t k_begin,
                                        std::uint64_t k_end) {
  const ComplexPoint r = cis_turns(ph.turns_linear(2 * kLanes * kLanes));
  const double rr = r.real();
  const double ri = r.imag();
  LaneKahan acc_re;
  LaneKahan acc_im;
  LaneKahan acc_h;
  LaneComplex z;
  LaneComplex w;
  const double k_last = static_cast<double>(k_end - 1);
  for (std::uint64_t k0 = k_begin; k0 < k_end; k0 += kBlock) {
    anchor_stream(ph, k0, z, w);
    LaneArray kd;
    for (std::uint64_t j = 0; j < kLanes; ++j) kd[j] = static_cast<double>(k0 + j);
    const std::uint64_t steps = std::min<std::uint64_t>(kBlock, k_end - k0 + kLanes - 1) / kLanes;
    for (std::uint64_t m0 = 0; m0 < steps; m0 += kInner) {
      // short plain partial sums keep the compensated update off the critical path
      LaneComplex part;
      LaneArray part_h{};
      const std::uint64_t m1 = std::min(steps, m0 + kInner);
      for (std::uint64_t m = m0; m < m1; ++m) {
        for (std::uint64_t j = 0; j < kLanes; ++j) {
          const double live = static_cast<double>(kd[j] <= k_last);
          const double inv = live / (kd[j] * kd[j]);
          part.re[j] += z.re[j] * inv;
          part.im[j] += z.im[j] * inv;
          part_h[j] += inv;
          const double zr = z.re[j] * w.re[j] - z.im[j] * w.im[j];
          const double zi = z.re[j] * w.im[j] + z.im[j] * w.re[j];
          const double wr = w.re[j] * rr - w.im[j] * ri;
          const double wi = w.re[j] * ri + w.im[j] * rr;
          z.re[j] = zr;
          z.im[j] = zi;
          w.re[j] = wr;
          w.im[j] = wi;
          kd[j] += static_cast<double>(kLanes);
        }
      }
      for (std::uint64_t j = 0; j < kLanes; ++j) {
        acc_re.add(j, part.re[j]);
        acc_im.add(j, part.im[j]);
        acc_h.add(j, part_h[j]);
      }
    }
  }
  CompensatedSum re;
  CompensatedSum im;
  CompensatedSum h;
  acc_re.flush_into(re);
  acc_im.flush_into(im);
  acc_h.flush_into(h);
  return {{re.value(), im.value()}, h.value()};
}

/// sum_{k=1}^{N} z0_k (zh_k - 1) / k^2 over a chunk, zh_k - 1 tracked directly.
inline std::complex<double> delta_chunk(const QuadraticPhase& base, const QuadraticPhase& step,
                                        std::uint64_t k_begin, std::uint64_t k_end) {
  const ComplexPoint r = cis_turns(base.turns_linear(2 * kLanes * kLanes));
  const ComplexPoint rm1 = cis_turns_minus_one(step.turns_linear(2 * kLanes * kLanes));
  const double rr = r.real();
  const double ri = r.imag();
  const double sr = rm1.real();
  const double si = rm1.imag();
  LaneKahan acc_re;
  LaneKahan acc_im;
  LaneComplex z;
  LaneComplex w;
  LaneComplex e;
  LaneComplex v;
  const double k_last = static_cast<double>(k_end - 1);
  for (std::uint64_t k0 = k_begin; k0 < k_end; k0 += kBlock) {
    anchor_stream(base, k0, z, w);
    anchor_stream_minus_one(step, k0, e, v);
    LaneArray kd;
    for (std::uint64_t j = 0; j < kLanes; ++j) kd[j] = static_cast<double>(k0 + j);
    const std::uint64_t steps = std::min<std::uint64_t>(kBlock, k_end - k0 + kLanes - 1) / kLanes;
    for (std::uint64_t m0 = 0; m0 < steps; m0 += kInner) {
      LaneComplex part;
      const std::uint64_t m1 = std::min(steps, m0 + kInner);
      for (std::uint64_t m = m0; m < m1; ++m) {
        for (std::uint64_t j = 0; j < kLanes; ++j) {
          const double live = static_cast<double>(kd[j] <= k_last);
          const double inv = live / (kd[j] * kd[j]);
          const double pr = z.re[j] * e.re[j] - z.im[j] * e.im[j];
          const double pi = z.re[j] * e.im[j] + z.im[j] * e.re[j];
          part.re[j] += pr * inv;
          part.im[j] += pi * inv;
          // (1 + e)(1 + v) - 1 and (1 + v)(1 + s) - 1
          const double er = e.re[j] + v.re[j] + (e.re[j] * v.re[j] - e.im[j] * v.im[j]);
          const double ei = e.im[j] + v.im[j] + (e.re[j] * v.im[j] + e.im[j] * v.re[j]);
          const double vr = v.re[j] + sr + (v.re[j] * sr - v.im[j] * si);
          const double vi = v.im[j] + si + (v.re[j] * si + v.im[j] * sr);
          e.re[j] = er;
          e.im[j] = ei;
          v.re[j] = vr;
          v.im[j] = vi;
          const double zr = z.re[j] * w.re[j] - z.im[j] * w.im[j];
          const double zi = z.re[j] * w.im[j] + z.im[j] * w.re[j];
          const double wr = w.re[j] * rr - w.im[j] * ri;
          const double wi = w.re[j] * ri + w.im[j] * rr;
          z.re[j] = zr;
          z.im[j] = zi;
          w.re[j] = wr;
          w.im[j] = wi;
          kd[j] += static_cast<double>(kLanes);
        }
      }
      for (std::uint64_t j = 0; j < kLanes; ++j) {
        acc_re.add(j, part.re[j]);
        acc_im.add(j, part.im[j]);
      }
    }
  }
  CompensatedSum re;
  CompensatedSum im;
  acc_re.flush_into(re);
  acc_im.flush_into(im);
  return {re.value(), im.value()};
}

inline std::uint64_t chunk_count(std::uint64_t n_terms) { return (n_terms + kChunk - 1) / kChunk; }

/// sum_{k=1}^{N} exp(2 pi i k^2 c) / k^2 together with sum_{k=1}^{N} 1/k^2.
inline QuadraticPartial quadratic_sum(const QuadraticPhase& ph, std::uint64_t n_terms) {
  const std::uint64_t chunks = chunk_count(n_terms);
  std::vector<std::complex<double>> osc(chunks);
  std::vector<double> basel(chunks);
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const std::uint64_t b = 1 + static_cast<std::uint64_t>(c) * kChunk;
    const std::uint64_t e = std::min<std::uint64_t>(b + kChunk, n_terms + 1);
    const QuadraticPartial part = quadratic_chunk(ph, b, e);
    osc[static_cast<std::size_t>(c)] = part.oscillatory;
    basel[static_cast<std::size_t>(c)] = part.basel;
  }
  return {ordered_sum(osc), ordered_sum(basel)};
}

/// sum_{k=1}^{N} exp(2 pi i k^2 a) (exp(2 pi i k^2 b) - 1) / k^2.
inline std::complex<double> delta_sum(const QuadraticPhase& base, const QuadraticPhase& step,
                                      std::uint64_t n_terms) {
  const std::uint64_t chunks = chunk_count(n_terms);
  std::vector<std::complex<double>> parts(chunks);
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const std::uint64_t b = 1 + static_cast<std::uint64_t>(c) * kChunk;
    const std::uint64_t e = std::min<std::uint64_t>(b + kChunk, n_terms + 1);
    parts[static_cast<std::size_t>(c)] = delta_chunk(base, step, b, e);
  }
  return ordered_sum(parts);
}

}  // namespace rnf::detail
