///
/// @file  summatory.hpp
/// @brief Psi(n) = phi(1) + ... + phi(n).
///
///        Small arguments are read from a sieve prefix table. Larger ones
///        use the identity
///
///          sum_{d=1}^{n} Psi(floor(n/d)) = n(n+1)/2
///
///        i.e. Psi(n) = n(n+1)/2 - sum_{d=2}^{n} Psi(floor(n/d)), where
///        runs of d sharing the same quotient are summed as one block.
///        Every recursive argument is itself a quotient floor(n/k), so
///        the memo stays small (O(n / threshold) entries above the
///        table). With threshold ~ n^(2/3) the total work is ~ n^(2/3).
///

#pragma once

#include <totsum/error.hpp>
#include <totsum/nat.hpp>
#include <totsum/totient.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace totsum {

/// Throws ErrorKind::overflow unless n(n+1)/2, the largest intermediate
/// of the recurrence, is representable.
inline void require_psi_range(Nat n) {
  try {
    (void)triangular(n);
  } catch (const Error&) {
    fail(ErrorKind::overflow,
         "Psi(" + n.to_string() + ") is out of range: n(n+1)/2 exceeds 128 bits");
  }
}

/// ceil(n^(2/3)), clamped to [1, cap].
inline std::uint64_t default_threshold(Nat n, std::uint64_t cap = kDefaultSieveCap) {
  const long double x = std::ceil(std::pow(static_cast<long double>(n.raw()), 2.0L / 3.0L));
  if (!(x < static_cast<long double>(cap))) return std::max<std::uint64_t>(cap, 1);
  return std::max<std::uint64_t>(static_cast<std::uint64_t>(x), 1);
}

inline constexpr std::uint64_t kDefaultThreshold = 4'000'000;

struct MemoStats {
  std::uint64_t hits = 0;      // recurrence arguments answered from the memo
  std::uint64_t computed = 0;  // recurrence evaluations that added an entry
};

class SummatoryEngine {
 public:
  /// Builds Psi(0..threshold) from a fresh phi table.
  explicit SummatoryEngine(std::uint64_t threshold, std::uint64_t cap = kDefaultSieveCap)
      : SummatoryEngine(std::make_shared<const PhiTable>(phi_sieve(Nat(threshold), cap))) {}

  /// Shares an existing table; the prefix covers the whole table.
  explicit SummatoryEngine(std::shared_ptr<const PhiTable> table)
      : table_(std::move(table)), prefix_(build_prefix(*table_)) {}

  /// A new engine over the same immutable tables with an empty memo.
  /// This is how concurrent workers get their own engine.
  SummatoryEngine fork() const { return SummatoryEngine(table_, prefix_); }

  std::uint64_t threshold() const noexcept { return table_->limit(); }
  const PhiTable& table() const noexcept { return *table_; }
  std::shared_ptr<const PhiTable> shared_table() const noexcept { return table_; }

  /// Psi(k) straight from the prefix table, k <= threshold.
  std::uint64_t sieve_prefix(std::uint64_t k) const noexcept { return (*prefix_)[k]; }

  Nat psi(Nat n) {
    if (n <= Nat(threshold())) return sieve_prefix(static_cast<std::uint64_t>(n.raw()));
    require_psi_range(n);
    return psi_large(n);
  }

  const MemoStats& stats() const noexcept { return stats_; }
  std::size_t memo_size() const noexcept { return memo_.size(); }

  /// Memo entries ordered by n.
  std::map<Nat, Nat> memo_entries() const { return {memo_.begin(), memo_.end()}; }

  /// Adds a memo entry. Entries inside the sieve range are not stored;
  /// they must agree with the table or the call fails.
  void preload(Nat n, Nat value) {
    if (n <= Nat(threshold())) {
      if (Nat(sieve_prefix(static_cast<std::uint64_t>(n.raw()))) != value)
        fail(ErrorKind::parse, "cached Psi(" + n.to_string() + ") = " + value.to_string() +
                                   " disagrees with the sieve");
      return;
    }
    memo_.insert_or_assign(n, value);
  }

  void save_cache(const std::filesystem::path& path) const;
  void load_cache(const std::filesystem::path& path);

 private:
  using Prefix = std::vector<std::uint64_t>;

  SummatoryEngine(std::shared_ptr<const PhiTable> table, std::shared_ptr<const Prefix> prefix)
      : table_(std::move(table)), prefix_(std::move(prefix)) {}

  static std::shared_ptr<const Prefix> build_prefix(const PhiTable& t) {
    auto prefix = std::make_shared<Prefix>(t.limit() + 1);
    auto& s = *prefix;
    s[0] = 0;
    for (std::uint64_t k = 1; k <= t.limit(); ++k) s[k] = s[k - 1] + t[k];
    return prefix;
  }

  Nat psi_large(Nat n) {
    if (auto it = memo_.find(n); it != memo_.end()) {
      ++stats_.hits;
      return it->second;
    }
    const Nat total = n.fits_u64() ? psi_large_u64(static_cast<std::uint64_t>(n.raw()))
                                   : psi_large_wide(n);
    ++stats_.computed;
    memo_.emplace(n, total);
    return total;
  }

  Nat psi_small_or_large(std::uint64_t q) {
    return q <= threshold() ? Nat(sieve_prefix(q)) : psi_large(Nat(q));
  }

  // Subtracted terms are nonnegative and sum to n(n+1)/2 - Psi(n), which
  // the caller has range-checked, so the running total cannot wrap.
  //   d <= n/(s+1): quotients n/d are all distinct and > s, taken one by one
  //   q <= s:       the d with n/d == q form (n/(q+1), n/q]
  Nat psi_large_u64(std::uint64_t n) {
    const std::uint64_t s = isqrt(n);
    uint128_t total = triangular(Nat(n)).raw();
    const std::uint64_t split = n / (s + 1);
    for (std::uint64_t d = 2; d <= split; ++d) total -= psi_small_or_large(n / d).raw();
    std::uint64_t hi = n;  // n / q for the previous q
    for (std::uint64_t q = 1; q <= s; ++q) {
      const std::uint64_t lo = n / (q + 1);
      const std::uint64_t count = hi - std::max(lo, split);
      if (hi > split && count != 0) total -= uint128_t(count) * psi_small_or_large(q).raw();
      hi = lo;
    }
    return Nat::from_raw(total);
  }

  static std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
  }

  Nat psi_large_wide(Nat n) {
    // inner Psi arguments are <= n/2, so their own ranges already fit
    Nat total = triangular(n);
    Nat d = 2;
    while (d <= n) {
      const Nat q = n / d;
      const Nat last = n / q;  // largest d' with floor(n/d') == q
      const Nat inner =
          q <= Nat(threshold()) ? Nat(sieve_prefix(static_cast<std::uint64_t>(q.raw())))
                                : psi_large(q);
      total -= (last - d + 1) * inner;
      d = last + 1;
    }
    return total;
  }

  std::shared_ptr<const PhiTable> table_;
  std::shared_ptr<const Prefix> prefix_;
  std::unordered_map<Nat, Nat, NatHash> memo_;
  MemoStats stats_;
};

inline SummatoryEngine build_engine(Nat threshold, std::uint64_t cap = kDefaultSieveCap) {
  if (threshold.is_zero()) fail(ErrorKind::domain, "engine threshold must be >= 1");
  if (threshold > Nat(cap))
    fail(ErrorKind::resource, "engine threshold " + threshold.to_string() + " exceeds cap of " +
                                  std::to_string(cap) + " entries");
  return SummatoryEngine(threshold.to_u64(), cap);
}

inline Nat psi(SummatoryEngine& engine, Nat n) { return engine.psi(n); }

/// Literal sum of a freshly sieved table.
inline Nat psi_bruteforce(Nat n, std::uint64_t cap = kDefaultSieveCap) {
  if (n.is_zero()) return 0;
  const PhiTable t = phi_sieve(n, cap);
  Nat sum = 0;
  for (std::uint64_t k = 1; k <= t.limit(); ++k) sum += t[k];
  return sum;
}

// Cache file: "n,psi" header, then "<n>,<psi>" lines in strictly increasing n.

inline void SummatoryEngine::save_cache(const std::filesystem::path& path) const {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot write cache file " + tmp.string());
    out << "n,psi\n";
    for (const auto& [n, v] : memo_entries()) out << n << ',' << v << '\n';
    out.flush();
    if (!out) fail(ErrorKind::io, "error writing cache file " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::io, "cannot replace cache file " + path.string() + ": " + ec.message());
}

inline void SummatoryEngine::load_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot read cache file " + path.string());

  auto malformed = [&](std::size_t line_no, const std::string& why) {
    fail(ErrorKind::parse,
         path.string() + ":" + std::to_string(line_no) + ": malformed cache entry: " + why);
  };

  // Parse the whole file before touching the memo so a bad file changes nothing.
  struct Entry {
    std::size_t line_no;
    Nat n, v;
  };
  std::vector<Entry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "n,psi") malformed(line_no, "expected header 'n,psi'");
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) malformed(line_no, "missing ','");
    Nat n, v;
    try {
      n = Nat::parse(std::string_view(line).substr(0, comma));
      v = Nat::parse(std::string_view(line).substr(comma + 1));
    } catch (const Error& e) {
      malformed(line_no, e.what());
    }
    if (!entries.empty() && !(entries.back().n < n))
      malformed(line_no, "n values must be strictly increasing");
    entries.push_back({line_no, n, v});
  }
  if (in.bad()) fail(ErrorKind::io, "error reading cache file " + path.string());

  for (const auto& e : entries) {
    if (e.n <= Nat(threshold()) && Nat(sieve_prefix(static_cast<std::uint64_t>(e.n.raw()))) != e.v)
      malformed(e.line_no, "Psi(" + e.n.to_string() + ") disagrees with the sieve");
  }
  for (const auto& e : entries) preload(e.n, e.v);
}

}  // namespace totsum
