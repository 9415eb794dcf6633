///
/// @file  nat.hpp
/// @brief Nat is an exact unsigned 128-bit integer. Every arithmetic
///        operation is checked: a result that does not fit raises
///        ErrorKind::overflow instead of wrapping. Subtraction below
///        zero is reported the same way.
///
///        Division takes a 64-bit fast path when both operands fit,
///        since 128-bit division goes through a libgcc call and the
///        Psi recurrence divides a lot.
///

#pragma once

#include <totsum/error.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

namespace totsum {

__extension__ typedef unsigned __int128 uint128_t;

class Nat {
 public:
  constexpr Nat() noexcept = default;
  constexpr Nat(std::uint64_t v) noexcept : v_(v) {}  // NOLINT: implicit on purpose

  static constexpr Nat from_raw(uint128_t v) noexcept {
    Nat n;
    n.v_ = v;
    return n;
  }
  static constexpr Nat max() noexcept {
    return from_raw(std::numeric_limits<uint128_t>::max());
  }

  constexpr uint128_t raw() const noexcept { return v_; }
  constexpr bool fits_u64() const noexcept {
    return v_ <= std::numeric_limits<std::uint64_t>::max();
  }
  /// Narrowing accessor; the caller must know the value fits.
  std::uint64_t to_u64() const {
    if (!fits_u64())
      fail(ErrorKind::range, to_string() + " does not fit in 64 bits");
    return static_cast<std::uint64_t>(v_);
  }
  constexpr bool is_zero() const noexcept { return v_ == 0; }

  friend constexpr bool operator==(Nat, Nat) noexcept = default;
  friend constexpr std::strong_ordering operator<=>(Nat a, Nat b) noexcept {
    return a.v_ <=> b.v_;
  }

  friend Nat operator+(Nat a, Nat b) {
    uint128_t r;
    if (__builtin_add_overflow(a.v_, b.v_, &r))
      fail(ErrorKind::overflow, "overflow in " + a.to_string() + " + " + b.to_string());
    return from_raw(r);
  }
  friend Nat operator-(Nat a, Nat b) {
    if (b.v_ > a.v_)
      fail(ErrorKind::overflow, "underflow in " + a.to_string() + " - " + b.to_string());
    return from_raw(a.v_ - b.v_);
  }
  friend Nat operator*(Nat a, Nat b) {
    uint128_t r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r))
      fail(ErrorKind::overflow, "overflow in " + a.to_string() + " * " + b.to_string());
    return from_raw(r);
  }
  friend Nat operator/(Nat a, Nat b) {
    if (b.v_ == 0) fail(ErrorKind::domain, "division by zero");
    if (a.fits_u64() && b.fits_u64())
      return Nat(static_cast<std::uint64_t>(a.v_) / static_cast<std::uint64_t>(b.v_));
    return from_raw(a.v_ / b.v_);
  }
  friend Nat operator%(Nat a, Nat b) {
    if (b.v_ == 0) fail(ErrorKind::domain, "division by zero");
    if (a.fits_u64() && b.fits_u64())
      return Nat(static_cast<std::uint64_t>(a.v_) % static_cast<std::uint64_t>(b.v_));
    return from_raw(a.v_ % b.v_);
  }

  Nat& operator+=(Nat b) { return *this = *this + b; }
  Nat& operator-=(Nat b) { return *this = *this - b; }
  Nat& operator*=(Nat b) { return *this = *this * b; }
  Nat& operator/=(Nat b) { return *this = *this / b; }
  Nat& operator%=(Nat b) { return *this = *this % b; }

  std::string to_string() const {
    if (v_ == 0) return "0";
    char buf[40];
    char* end = buf + sizeof(buf);
    char* p = end;
    uint128_t v = v_;
    while (v != 0) {
      *--p = static_cast<char>('0' + static_cast<int>(v % 10));
      v /= 10;
    }
    return std::string(p, end);
  }

  /// Strict decimal: one or more ASCII digits, nothing else.
  static Nat parse(std::string_view s) {
    if (s.empty()) fail(ErrorKind::parse, "empty number");
    uint128_t v = 0;
    for (char c : s) {
      if (c < '0' || c > '9')
        fail(ErrorKind::parse, "not a decimal number: '" + std::string(s) + "'");
      if (__builtin_mul_overflow(v, uint128_t{10}, &v) ||
          __builtin_add_overflow(v, uint128_t(c - '0'), &v))
        fail(ErrorKind::overflow, "number out of 128-bit range: " + std::string(s));
    }
    return from_raw(v);
  }

  friend std::ostream& operator<<(std::ostream& os, Nat n) { return os << n.to_string(); }

 private:
  uint128_t v_ = 0;
};

/// n(n+1)/2, checked.
inline Nat triangular(Nat n) {
  // one of n, n+1 is even; halve it before multiplying
  Nat next = n + 1;
  return (n.raw() % 2 == 0) ? (n / 2) * next : n * (next / 2);
}

struct NatHash {
  std::size_t operator()(Nat n) const noexcept {
    // splitmix64 finalizer over both halves
    std::uint64_t x = static_cast<std::uint64_t>(n.raw()) ^
                      (static_cast<std::uint64_t>(n.raw() >> 64) * 0x9e3779b97f4a7c15ULL);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return static_cast<std::size_t>(x);
  }
};

}  // namespace totsum

template <>
struct std::hash<totsum::Nat> : totsum::NatHash {};
