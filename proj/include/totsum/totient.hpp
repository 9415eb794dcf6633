#pragma once

#include <totsum/arith.hpp>
#include <totsum/error.hpp>
#include <totsum/nat.hpp>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace totsum {

/// Largest table any sieve may allocate unless configured otherwise.
inline constexpr std::uint64_t kDefaultSieveCap = 100'000'000;

struct PrimePower {
  Prime prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime decomposition, primes strictly increasing. 1 factors as the empty list.
struct Factorization {
  std::vector<PrimePower> factors;

  Nat value() const {
    Nat v = 1;
    for (const auto& f : factors) v *= pow(f.prime.value(), f.exponent);
    return v;
  }
};

/// Trial division up to sqrt(n); n must be in [1, 2^64).
inline Factorization factorize(Nat n) {
  if (n.is_zero()) fail(ErrorKind::domain, "factorize: n must be >= 1");
  if (!n.fits_u64())
    fail(ErrorKind::range, "factorize: " + n.to_string() + " exceeds the 64-bit trial division limit");
  std::uint64_t m = static_cast<std::uint64_t>(n.raw());
  Factorization out;
  auto take = [&](std::uint64_t d) {
    unsigned e = 0;
    while (m % d == 0) {
      m /= d;
      ++e;
    }
    if (e != 0) out.factors.push_back({Prime(d), e});
  };
  take(2);
  take(3);
  // d*d <= m written as d <= m/d so it cannot overflow near 2^64
  for (std::uint64_t d = 5; d <= m / d; d += 6) {
    take(d);
    take(d + 2);
  }
  if (m > 1) out.factors.push_back({Prime(m), 1});
  return out;
}

/// Euler's totient as prod p^(a-1) * (p-1), all in integers.
inline Nat phi(Nat n) {
  Nat result = 1;
  for (const auto& [p, e] : factorize(n).factors)
    result *= pow(p.value(), e - 1) * (p.value() - 1);
  return result;
}

/// phi(p*m) from phi(m): (p-1)*phi(m) when p does not divide m, p*phi(m) otherwise.
inline Nat phi_step(const Prime& p, Nat m) {
  if (m.is_zero()) fail(ErrorKind::domain, "phi_step: m must be >= 1");
  (void)(p.value() * m);  // the product itself must be representable
  const Nat phi_m = phi(m);
  return gcd(p.value(), m) == Nat(1) ? (p.value() - 1) * phi_m : p.value() * phi_m;
}

/// Dense phi(1..limit). Immutable once built; share freely between readers.
class PhiTable {
 public:
  std::uint64_t limit() const noexcept { return limit_; }

  /// phi(k) for 1 <= k <= limit.
  std::uint32_t operator[](std::uint64_t k) const noexcept { return values_[k]; }
  Nat at(Nat k) const {
    if (k.is_zero() || k > Nat(limit_))
      fail(ErrorKind::range, "phi table lookup " + k.to_string() + " outside [1, " +
                                 std::to_string(limit_) + "]");
    return values_[static_cast<std::size_t>(k.raw())];
  }

  friend PhiTable phi_sieve(Nat limit, std::uint64_t cap);

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> values_;  // index 0 unused
};

/// Linear (Euler) sieve: every composite is visited once, by its smallest prime factor.
inline PhiTable phi_sieve(Nat limit, std::uint64_t cap = kDefaultSieveCap) {
  if (limit.is_zero()) fail(ErrorKind::domain, "phi_sieve: limit must be >= 1");
  if (limit > Nat(cap) || limit > Nat(std::numeric_limits<std::uint32_t>::max()))
    fail(ErrorKind::resource, "sieve limit " + limit.to_string() + " exceeds cap of " +
                                  std::to_string(cap) + " entries");
  const auto n = static_cast<std::uint32_t>(limit.raw());

  PhiTable t;
  t.limit_ = n;
  t.values_.assign(std::size_t{n} + 1, 0);
  auto& phi = t.values_;
  std::vector<std::uint32_t> primes;
  phi[1] = 1;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (phi[i] == 0) {
      phi[i] = static_cast<std::uint32_t>(i - 1);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      const std::uint64_t ip = i * p;
      if (ip > n) break;
      if (i % p == 0) {
        phi[ip] = phi[i] * p;
        break;
      }
      phi[ip] = phi[i] * (p - 1);
    }
  }
  return t;
}

}  // namespace totsum
