#pragma once

#include <totsum/error.hpp>
#include <totsum/nat.hpp>

#include <array>
#include <cstdint>
#include <limits>
#include <string>

namespace totsum {

/// q with q*m <= a < (q+1)*m.
inline Nat floor_div(Nat a, Nat m) {
  if (m.is_zero()) fail(ErrorKind::domain, "floor_div: division by zero");
  return a / m;
}

inline Nat gcd(Nat a, Nat b) {
  if (a.is_zero() && b.is_zero()) fail(ErrorKind::domain, "gcd(0, 0) is undefined");
  while (!b.is_zero()) {
    Nat r = a % b;
    a = b;
    b = r;
  }
  return a;
}

/// base^exp, checked.
inline Nat pow(Nat base, unsigned exp) {
  Nat result = 1;
  while (exp != 0) {
    if (exp & 1u) result *= base;
    exp >>= 1;
    if (exp != 0) base *= base;
  }
  return result;
}

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(uint128_t(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e != 0) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

/// Strong probable-prime test of odd n > 2 to base a.
inline bool is_sprp(std::uint64_t n, std::uint64_t a) {
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  std::uint64_t x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

inline bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (std::uint64_t d = 5; d * d <= n; d += 6)
    if (n % d == 0 || n % (d + 2) == 0) return false;
  return true;
}

// The first 12 primes as witnesses are deterministic for n < 3.18 * 10^23.
inline constexpr std::array<std::uint64_t, 12> kWitnesses = {2, 3, 5, 7, 11, 13,
                                                             17, 19, 23, 29, 31, 37};

}  // namespace detail

/// Deterministic primality for n < 2^64. Larger inputs raise ErrorKind::range.
inline bool is_prime(Nat n) {
  if (!n.fits_u64())
    fail(ErrorKind::range, "primality of " + n.to_string() + " is not supported above 2^64");
  const std::uint64_t v = static_cast<std::uint64_t>(n.raw());
  if (v < (std::uint64_t{1} << 32)) return detail::is_prime_trial(v);
  if (v % 2 == 0) return false;
  for (std::uint64_t a : detail::kWitnesses) {
    if (v % a == 0) return false;
    if (!detail::is_sprp(v, a)) return false;
  }
  return true;
}

/// A Nat proven prime at construction.
class Prime {
 public:
  explicit Prime(Nat value) : value_(value) {
    if (!is_prime(value)) fail(ErrorKind::domain, value.to_string() + " is not prime");
  }
  explicit Prime(std::uint64_t value) : Prime(Nat(value)) {}

  Nat value() const noexcept { return value_; }
  std::uint64_t u64() const noexcept { return static_cast<std::uint64_t>(value_.raw()); }

  friend bool operator==(const Prime&, const Prime&) = default;
  friend auto operator<=>(const Prime&, const Prime&) = default;

 private:
  Nat value_;
};

/// Largest a >= 0 with p^a <= n, by exact repeated multiplication.
inline unsigned ilog(const Prime& p, Nat n) {
  if (n.is_zero()) fail(ErrorKind::domain, "ilog: n must be >= 1");
  const Nat base = p.value();
  unsigned a = 0;
  Nat power = 1;
  // power <= n / base  <=>  power * base <= n, without overflowing
  while (power <= n / base) {
    power = power * base;
    ++a;
  }
  return a;
}

}  // namespace totsum
