///
/// @file  partition.hpp
/// @brief Splitting Psi(n) by a prime p:
///
///          Delta(n, p)   = sum of phi(k), k <= n, p | k
///          Upsilon(n, p) = sum of phi(k), k <= n, gcd(k, p) = 1
///          Psi(n)        = Upsilon(n, p) + Delta(n, p)
///
///        Since phi(jp) = (p-1) phi(j) for p not dividing j and p phi(j)
///        otherwise, Delta satisfies
///
///          Delta(n, p) = (p-1) Psi(floor(n/p)) + Delta(floor(n/p), p)
///
///        and unrolling down to an argument below p gives the closed form
///
///          Delta(n, p) = (p-1) sum_{a=1}^{ilog_p(n)} Psi(floor(n/p^a)).
///
///        Both routes are provided, plus a literal sum over a phi table
///        as an independent oracle. All functions are total on n >= 0:
///        Delta(n, p) = 0 for n < p.
///

#pragma once

#include <totsum/arith.hpp>
#include <totsum/error.hpp>
#include <totsum/nat.hpp>
#include <totsum/summatory.hpp>
#include <totsum/totient.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace totsum {

/// Closed form: (p-1) * sum over a = 1..ilog(p, n) of Psi(floor(n / p^a)),
/// with each quotient taken against the power p^a directly.
inline Nat delta_theorem(SummatoryEngine& engine, Nat n, const Prime& p) {
  if (n < p.value()) return 0;
  const unsigned top = ilog(p, n);
  Nat sum = 0;
  for (unsigned a = 1; a <= top; ++a) sum += engine.psi(floor_div(n, pow(p.value(), a)));
  return (p.value() - 1) * sum;
}

/// One-step recursion, unrolled as a loop over the quotient chain n, n/p, n/p^2, ...
inline Nat delta_recursive(SummatoryEngine& engine, Nat n, const Prime& p) {
  Nat delta = 0;
  while (n >= p.value()) {
    n = floor_div(n, p.value());
    delta += (p.value() - 1) * engine.psi(n);
  }
  return delta;
}

/// Literal sum of phi(k) over multiples k = p, 2p, ... <= n read from the table.
inline Nat delta_bruteforce(const PhiTable& table, Nat n, const Prime& p) {
  if (n > Nat(table.limit()))
    fail(ErrorKind::range, "delta_bruteforce: n = " + n.to_string() + " exceeds table limit " +
                               std::to_string(table.limit()));
  const auto limit = static_cast<std::uint64_t>(n.raw());
  Nat sum = 0;
  if (!p.value().fits_u64()) return sum;
  for (std::uint64_t k = p.u64(); k <= limit; k += p.u64()) sum += table[k];
  return sum;
}

/// Literal sum of phi(k) over k <= n coprime to p.
inline Nat upsilon_bruteforce(const PhiTable& table, Nat n, const Prime& p) {
  if (n > Nat(table.limit()))
    fail(ErrorKind::range, "upsilon_bruteforce: n = " + n.to_string() + " exceeds table limit " +
                               std::to_string(table.limit()));
  const auto limit = static_cast<std::uint64_t>(n.raw());
  Nat sum = 0;
  for (std::uint64_t k = 1; k <= limit; ++k)
    if (k % p.u64() != 0) sum += table[k];
  return sum;
}

inline Nat upsilon(SummatoryEngine& engine, Nat n, const Prime& p) {
  return engine.psi(n) - delta_theorem(engine, n, p);
}

struct PartitionSums {
  Nat n;
  Prime p;
  Nat psi;
  Nat upsilon;
  Nat delta;
};

/// Delta first so that Psi(n) itself is the only evaluation not already memoized.
inline PartitionSums partition(SummatoryEngine& engine, Nat n, const Prime& p) {
  const Nat delta = delta_theorem(engine, n, p);
  const Nat total = engine.psi(n);
  return PartitionSums{n, p, total, total - delta, delta};
}

/// Outcome of the three forms of the Delta(pn, p) identity at one (n, p).
///
///   corrected:      Delta(pn, p) = (p-1) Psi(n) + Delta(n, p)
///   printed:        Delta(pn, p) = (p-1) (Psi(n) + Delta(n, p))
///   printed, p = 2: Delta(2n, 2) = Psi(n) + Delta(n, 2)
///
/// The corrected form is the one-step recursion applied at pn. The printed
/// general form only agrees with it when p = 2 or Delta(n, p) = 0.
struct RemarkCheck {
  Nat delta_pn;       // left-hand side Delta(pn, p)
  Nat corrected_rhs;  // (p-1) Psi(n) + Delta(n, p)
  Nat printed_rhs;    // (p-1) (Psi(n) + Delta(n, p))
  bool corrected_holds = false;
  bool paper_general_holds = false;
  std::optional<bool> p2_holds;  // empty unless p == 2
};

inline RemarkCheck remark_check(SummatoryEngine& engine, Nat n, const Prime& p) {
  if (n.is_zero()) fail(ErrorKind::domain, "remark_check: n must be >= 1");
  const Nat pn = p.value() * n;
  const Nat pm1 = p.value() - 1;
  const Nat psi_n = engine.psi(n);
  const Nat delta_n = delta_theorem(engine, n, p);

  RemarkCheck r;
  r.delta_pn = delta_theorem(engine, pn, p);
  r.corrected_rhs = pm1 * psi_n + delta_n;
  r.printed_rhs = pm1 * (psi_n + delta_n);
  r.corrected_holds = r.delta_pn == r.corrected_rhs;
  r.paper_general_holds = r.delta_pn == r.printed_rhs;
  if (p.value() == Nat(2)) r.p2_holds = r.delta_pn == psi_n + delta_n;
  return r;
}

}  // namespace totsum
