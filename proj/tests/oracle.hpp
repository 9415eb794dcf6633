// Test-only reference implementations. Nothing here calls into the
// library; every value is computed from the definitions directly.

#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

/// phi(n) by counting 1 <= x <= n with gcd(x, n) = 1.
inline std::uint64_t phi_count(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t x = 1; x <= n; ++x)
    if (std::gcd(x, n) == 1) ++c;
  return c;
}

/// phi(1..n) by the divisor-sum sieve: phi(k) = k - sum_{d | k, d < k} phi(d).
inline std::vector<std::uint64_t> phi_gauss_table(std::uint64_t n) {
  std::vector<std::uint64_t> phi(n + 1, 0);
  for (std::uint64_t k = 1; k <= n; ++k) phi[k] = k;
  for (std::uint64_t d = 1; d <= n; ++d)
    for (std::uint64_t m = 2 * d; m <= n; m += d) phi[m] -= phi[d];
  return phi;
}

inline bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Sum of table[k] for k <= n with p | k (want_divisible) or p not dividing k.
inline std::uint64_t filtered_sum(const std::vector<std::uint64_t>& table, std::uint64_t n,
                                  std::uint64_t p, bool want_divisible) {
  std::uint64_t s = 0;
  for (std::uint64_t k = 1; k <= n; ++k)
    if ((k % p == 0) == want_divisible) s += table[k];
  return s;
}

inline std::uint64_t prefix_sum(const std::vector<std::uint64_t>& table, std::uint64_t n) {
  std::uint64_t s = 0;
  for (std::uint64_t k = 1; k <= n; ++k) s += table[k];
  return s;
}

}  // namespace oracle
