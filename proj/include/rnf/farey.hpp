#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "rnf/error.hpp"
#include "rnf/rational.hpp"

namespace rnf {

/// Euler's totient for 0..n by a linear sieve.
inline std::vector<std::uint64_t> totients_upto(std::uint64_t n) {
  std::vector<std::uint64_t> phi(n + 1);
  std::iota(phi.begin(), phi.end(), std::uint64_t{0});
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (phi[i] != i) continue;  // composite, already reduced by a smaller prime
    for (std::uint64_t j = i; j <= n; j += i) phi[j] -= phi[j] / i;
  }
  return phi;
}

/// Number of irreducible p/q with 1 <= p < q and q_min <= q <= q_max.
inline std::uint64_t farey_count(std::uint64_t q_min, std::uint64_t q_max) {
  require(q_min >= 2 && q_min <= q_max, ErrorCode::invalid_argument, "need 2 <= q_min <= q_max");
  const auto phi = totients_upto(q_max);
  std::uint64_t total = 0;
  for (std::uint64_t q = q_min; q <= q_max; ++q) total += phi[q];
  return total;
}

/// Calls f(p, q) for every irreducible p/q, 1 <= p < q, in order of q then p.
template <class F>
void for_each_farey(std::int64_t q_min, std::int64_t q_max, F&& f) {
  require(q_min >= 2 && q_min <= q_max, ErrorCode::invalid_argument, "need 2 <= q_min <= q_max");
  for (std::int64_t q = q_min; q <= q_max; ++q) {
    for (std::int64_t p = 1; p < q; ++p) {
      if (std::gcd(p, q) == 1) f(p, q);
    }
  }
}

inline std::vector<Rational> farey_enumerate(std::int64_t q_min, std::int64_t q_max) {
  std::vector<Rational> out;
  for_each_farey(q_min, q_max, [&](std::int64_t p, std::int64_t q) { out.emplace_back(p, q); });
  return out;
}

}  // namespace rnf
