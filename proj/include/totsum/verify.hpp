///
/// @file  verify.hpp
/// @brief Identity sweeps over n in [1, max_n] x a set of primes.
///
///        Brute-force reference values come from one phi table of size
///        max_n, accumulated into per-prime prefix sums. Psi-based sides
///        use a SummatoryEngine whose sieve covers only sqrt(max_n), so
///        the recurrence does the actual work. Workers split the n range
///        into contiguous chunks and each forks its own engine; results
///        merge to the same report for any number of jobs.
///

#pragma once

#include <totsum/arith.hpp>
#include <totsum/error.hpp>
#include <totsum/nat.hpp>
#include <totsum/partition.hpp>
#include <totsum/summatory.hpp>
#include <totsum/totient.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

namespace totsum {

enum class Check { eq2, thm, eq4, remark, prop1, prop3, psi_oracle };

inline constexpr Check kAllChecks[] = {Check::eq2,   Check::thm,   Check::eq4,       Check::remark,
                                       Check::prop1, Check::prop3, Check::psi_oracle};

inline std::string_view check_name(Check c) {
  switch (c) {
    case Check::eq2: return "eq2";
    case Check::thm: return "thm";
    case Check::eq4: return "eq4";
    case Check::remark: return "remark";
    case Check::prop1: return "prop1";
    case Check::prop3: return "prop3";
    case Check::psi_oracle: return "psi-oracle";
  }
  return "?";
}

inline Check parse_check(std::string_view s) {
  for (Check c : kAllChecks)
    if (check_name(c) == s) return c;
  fail(ErrorKind::parse, "unknown check '" + std::string(s) +
                             "' (expected eq2, thm, eq4, remark, prop1, prop3, psi-oracle)");
}

struct Failure {
  Nat n;
  Nat p;  // 0 for checks that do not take a prime
  Nat expected;
  Nat got;
};

struct CheckResult {
  std::string name;
  std::uint64_t cases_run = 0;
  std::uint64_t cases_failed = 0;
  std::optional<Failure> first_failure;
  /// Errata sub-checks record where a printed form diverges; they never fail the run.
  bool informational = false;
};

struct VerifyConfig {
  std::uint64_t max_n = 1;
  std::vector<Prime> primes;
  std::vector<Check> checks{std::begin(kAllChecks), std::end(kAllChecks)};
  unsigned jobs = 1;
  std::uint64_t sieve_cap = kDefaultSieveCap;
};

struct VerifyReport {
  VerifyConfig config;
  std::vector<CheckResult> checks;
  double elapsed_ms = 0;

  bool ok() const {
    return std::none_of(checks.begin(), checks.end(),
                        [](const CheckResult& c) { return !c.informational && c.cases_failed != 0; });
  }
};

namespace detail {

// Slots in the per-worker tally; order is the report order.
enum Slot : std::size_t {
  kEq2,
  kThm,
  kEq4,
  kRemark,
  kRemarkPrinted,
  kRemarkP2,
  kProp1,
  kProp3,
  kPsiOracle,
  kSlotCount
};

inline constexpr std::string_view kSlotNames[kSlotCount] = {
    "eq2", "thm", "eq4", "remark", "remark-as-printed", "remark-p2", "prop1", "prop3", "psi-oracle"};

struct Tally {
  std::uint64_t run = 0;
  std::uint64_t failed = 0;
  std::optional<Failure> first;
  std::size_t first_prime_index = 0;

  void record(bool pass, Nat n, std::size_t prime_index, Nat p, Nat expected, Nat got) {
    ++run;
    if (pass) return;
    ++failed;
    if (!first || std::tie(n, prime_index) < std::tie(first->n, first_prime_index)) {
      first = Failure{n, p, expected, got};
      first_prime_index = prime_index;
    }
  }

  void merge(const Tally& o) {
    run += o.run;
    failed += o.failed;
    if (o.first && (!first || std::tie(o.first->n, o.first_prime_index) <
                                  std::tie(first->n, first_prime_index))) {
      first = o.first;
      first_prime_index = o.first_prime_index;
    }
  }
};

struct Reference {
  std::vector<std::uint64_t> psi;                   // psi[n], n <= max_n
  std::vector<std::vector<std::uint64_t>> delta;    // per prime
  std::vector<std::vector<std::uint64_t>> upsilon;  // per prime
};

inline Reference build_reference(const PhiTable& table, const std::vector<Prime>& primes) {
  const std::uint64_t n = table.limit();
  Reference ref;
  ref.psi.assign(n + 1, 0);
  for (std::uint64_t k = 1; k <= n; ++k) ref.psi[k] = ref.psi[k - 1] + table[k];
  for (const Prime& p : primes) {
    std::vector<std::uint64_t> d(n + 1, 0), u(n + 1, 0);
    for (std::uint64_t k = 1; k <= n; ++k) {
      const bool divisible = k % p.u64() == 0;
      d[k] = d[k - 1] + (divisible ? table[k] : 0);
      u[k] = u[k - 1] + (divisible ? 0 : table[k]);
    }
    ref.delta.push_back(std::move(d));
    ref.upsilon.push_back(std::move(u));
  }
  return ref;
}

inline bool wants(const VerifyConfig& cfg, Check c) {
  return std::find(cfg.checks.begin(), cfg.checks.end(), c) != cfg.checks.end();
}

inline void sweep(const VerifyConfig& cfg, const Reference& ref, SummatoryEngine engine,
                  std::uint64_t lo, std::uint64_t hi, std::vector<Tally>& tally) {
  for (std::uint64_t n = lo; n <= hi; ++n) {
    const Nat N(n);
    if (wants(cfg, Check::psi_oracle)) {
      const Nat got = engine.psi(N);
      tally[kPsiOracle].record(got == Nat(ref.psi[n]), N, 0, 0, ref.psi[n], got);
    }
    for (std::size_t i = 0; i < cfg.primes.size(); ++i) {
      const Prime& p = cfg.primes[i];
      const Nat P = p.value();
      const Nat brute_delta = ref.delta[i][n];
      const Nat brute_upsilon = ref.upsilon[i][n];

      if (wants(cfg, Check::thm)) {
        const Nat thm = delta_theorem(engine, N, p);
        const Nat rec = delta_recursive(engine, N, p);
        const bool pass = thm == brute_delta && rec == brute_delta;
        tally[kThm].record(pass, N, i, P, brute_delta, thm != brute_delta ? thm : rec);
      }
      if (wants(cfg, Check::eq2)) {
        const Nat psi_n = engine.psi(N);
        const Nat ups = upsilon(engine, N, p);
        const Nat sum = ups + delta_theorem(engine, N, p);
        const bool pass = psi_n == sum && ups == brute_upsilon;
        tally[kEq2].record(pass, N, i, P, psi_n == sum ? brute_upsilon : psi_n,
                           psi_n == sum ? ups : sum);
      }
      if (wants(cfg, Check::eq4)) {
        const Nat lhs = delta_theorem(engine, N, p);
        const Nat q = floor_div(N, P);
        const Nat rhs = (P - 1) * engine.psi(q) + delta_theorem(engine, q, p);
        tally[kEq4].record(lhs == rhs, N, i, P, lhs, rhs);
      }
      if (wants(cfg, Check::remark)) {
        const RemarkCheck r = remark_check(engine, N, p);
        tally[kRemark].record(r.corrected_holds, N, i, P, r.delta_pn, r.corrected_rhs);
        tally[kRemarkPrinted].record(r.paper_general_holds, N, i, P, r.delta_pn, r.printed_rhs);
        if (r.p2_holds)
          tally[kRemarkP2].record(*r.p2_holds, N, i, P, r.delta_pn,
                                  engine.psi(N) + delta_theorem(engine, N, p));
      }
      if (wants(cfg, Check::prop1)) {
        const Nat step = phi_step(p, N);
        const Nat direct = phi(P * N);
        tally[kProp1].record(step == direct, N, i, P, direct, step);
      }
      if (wants(cfg, Check::prop3)) {
        // iterate floor(./p) k times against floor(n / p^k), one past the last nonzero quotient
        Nat q = N;
        bool pass = true;
        Nat expected = 0, got = 0;
        const unsigned top = ilog(p, N) + 1;
        for (unsigned k = 1; k <= top && pass; ++k) {
          q = floor_div(q, P);
          const Nat direct = floor_div(N, pow(P, k));
          if (q != direct) {
            pass = false;
            expected = direct;
            got = q;
          }
        }
        tally[kProp3].record(pass, N, i, P, expected, got);
      }
    }
  }
}

}  // namespace detail

inline VerifyReport verify_suite(const VerifyConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (cfg.max_n < 1) fail(ErrorKind::domain, "verify: max_n must be >= 1");
  if (cfg.primes.empty()) fail(ErrorKind::domain, "verify: at least one prime is required");
  if (cfg.checks.empty()) fail(ErrorKind::domain, "verify: no checks requested");
  if (cfg.max_n > cfg.sieve_cap)
    fail(ErrorKind::resource, "verify: max_n " + std::to_string(cfg.max_n) +
                                  " exceeds sieve cap of " + std::to_string(cfg.sieve_cap));

  const PhiTable table = phi_sieve(Nat(cfg.max_n), cfg.sieve_cap);
  const detail::Reference ref = detail::build_reference(table, cfg.primes);
  const auto small =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::sqrt(static_cast<double>(cfg.max_n))));
  const SummatoryEngine base(small, cfg.sieve_cap);

  const unsigned jobs =
      static_cast<unsigned>(std::clamp<std::uint64_t>(cfg.jobs == 0 ? 1 : cfg.jobs, 1, cfg.max_n));
  std::vector<std::vector<detail::Tally>> tallies(jobs,
                                                  std::vector<detail::Tally>(detail::kSlotCount));
  std::vector<std::exception_ptr> errors(jobs);
  {
    std::vector<std::jthread> workers;
    const std::uint64_t chunk = (cfg.max_n + jobs - 1) / jobs;
    for (unsigned w = 0; w < jobs; ++w) {
      const std::uint64_t lo = 1 + std::uint64_t{w} * chunk;
      const std::uint64_t hi = std::min(cfg.max_n, lo + chunk - 1);
      if (lo > hi) continue;
      workers.emplace_back([&, w, lo, hi] {
        try {
          detail::sweep(cfg, ref, base.fork(), lo, hi, tallies[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<detail::Tally> total(detail::kSlotCount);
  for (const auto& t : tallies)
    for (std::size_t s = 0; s < detail::kSlotCount; ++s) total[s].merge(t[s]);

  VerifyReport report;
  report.config = cfg;
  for (std::size_t s = 0; s < detail::kSlotCount; ++s) {
    if (total[s].run == 0) continue;
    CheckResult c;
    c.name = detail::kSlotNames[s];
    c.cases_run = total[s].run;
    c.cases_failed = total[s].failed;
    c.first_failure = total[s].first;
    c.informational = s == detail::kRemarkPrinted;
    report.checks.push_back(std::move(c));
  }
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace totsum
