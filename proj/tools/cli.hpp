// Command-line front end. Kept in a header so tests can drive run()
// directly with string streams.

#pragma once

#include <totsum/arith.hpp>
#include <totsum/error.hpp>
#include <totsum/nat.hpp>
#include <totsum/partition.hpp>
#include <totsum/summatory.hpp>
#include <totsum/totient.hpp>
#include <totsum/verify.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace totsum::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kOverflow = 3 };

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain:
    case ErrorKind::parse: return kUsage;
    case ErrorKind::overflow:
    case ErrorKind::range:
    case ErrorKind::resource:
    case ErrorKind::io: return kOverflow;
  }
  return kOverflow;
}

enum class Format { text, json, csv };

struct Options {
  Format format = Format::text;
  std::string cache;  // empty: no cache
  std::uint64_t sieve_cap = kDefaultSieveCap;
  bool timings = false;
};

/// One row of query output; every value is a decimal string.
struct Field {
  std::string key;
  std::string value;
};

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

inline std::string format_ms(double ms) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << ms;
  return os.str();
}

inline void emit_query(std::ostream& out, const Options& opt, const std::vector<Field>& fields,
                       const std::string& text_line) {
  switch (opt.format) {
    case Format::text:
      out << text_line << '\n';
      break;
    case Format::json: {
      nlohmann::ordered_json j;
      for (const auto& f : fields) j[f.key] = f.value;
      out << j.dump() << '\n';
      break;
    }
    case Format::csv: {
      for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i].key;
      out << '\n';
      for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i].value;
      out << '\n';
      break;
    }
  }
}

/// Engine for a query whose largest Psi argument is `target`.
/// The range check runs first so an overflow never pays for a sieve.
class EngineSession {
 public:
  EngineSession(const Options& opt, Nat target) : opt_(opt) {
    require_psi_range(target);
    engine_.emplace(build_engine(Nat(default_threshold(target, opt.sieve_cap)), opt.sieve_cap));
    if (!opt_.cache.empty() && std::filesystem::exists(opt_.cache)) engine_->load_cache(opt_.cache);
  }

  SummatoryEngine& engine() { return *engine_; }

  void persist() {
    if (!opt_.cache.empty()) engine_->save_cache(opt_.cache);
  }

 private:
  const Options& opt_;
  std::optional<SummatoryEngine> engine_;
};

inline Prime parse_prime(const std::string& s) { return Prime(Nat::parse(s)); }

inline std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ','))
    if (!cur.empty()) parts.push_back(cur);
  return parts;
}

inline int cmd_phi(const Options& opt, const std::string& n_str, std::ostream& out) {
  const auto t0 = Clock::now();
  const Nat n = Nat::parse(n_str);
  const Nat v = phi(n);
  std::vector<Field> f{{"query", "phi"}, {"n", n.to_string()}, {"result", v.to_string()},
                       {"method", "factorization"}};
  if (opt.timings) f.push_back({"elapsed_ms", format_ms(ms_since(t0))});
  emit_query(out, opt, f, v.to_string());
  return kOk;
}

inline int cmd_psi(const Options& opt, const std::string& n_str, std::string method,
                   std::ostream& out) {
  const auto t0 = Clock::now();
  const Nat n = Nat::parse(n_str);
  if (method == "auto")
    method = n <= Nat(std::min(kDefaultThreshold, opt.sieve_cap)) ? "sieve" : "sublinear";
  Nat v;
  if (method == "sieve") {
    v = psi_bruteforce(n, opt.sieve_cap);
  } else {
    EngineSession s(opt, n);
    v = s.engine().psi(n);
    s.persist();
  }
  std::vector<Field> f{{"query", "psi"}, {"n", n.to_string()}, {"result", v.to_string()},
                       {"method", method}};
  if (opt.timings) f.push_back({"elapsed_ms", format_ms(ms_since(t0))});
  emit_query(out, opt, f, v.to_string());
  return kOk;
}

inline Nat delta_by(const std::string& method, const Options& opt, Nat n, const Prime& p) {
  if (method == "brute") {
    if (n.is_zero()) return 0;
    const PhiTable t = phi_sieve(n, opt.sieve_cap);
    return delta_bruteforce(t, n, p);
  }
  EngineSession s(opt, floor_div(n, p.value()));
  const Nat v = method == "recursive" ? delta_recursive(s.engine(), n, p)
                                      : delta_theorem(s.engine(), n, p);
  s.persist();
  return v;
}

inline int cmd_delta(const Options& opt, const std::string& n_str, const std::string& p_str,
                     const std::string& method, std::ostream& out) {
  const auto t0 = Clock::now();
  const Nat n = Nat::parse(n_str);
  const Prime p = parse_prime(p_str);
  const Nat v = delta_by(method, opt, n, p);
  std::vector<Field> f{{"query", "delta"}, {"n", n.to_string()}, {"p", p.value().to_string()},
                       {"result", v.to_string()}, {"method", method}};
  if (opt.timings) f.push_back({"elapsed_ms", format_ms(ms_since(t0))});
  emit_query(out, opt, f, v.to_string());
  return kOk;
}

inline int cmd_upsilon(const Options& opt, const std::string& n_str, const std::string& p_str,
                       std::ostream& out) {
  const auto t0 = Clock::now();
  const Nat n = Nat::parse(n_str);
  const Prime p = parse_prime(p_str);
  EngineSession s(opt, n);
  const Nat v = upsilon(s.engine(), n, p);
  s.persist();
  std::vector<Field> f{{"query", "upsilon"}, {"n", n.to_string()}, {"p", p.value().to_string()},
                       {"result", v.to_string()}, {"method", "theorem"}};
  if (opt.timings) f.push_back({"elapsed_ms", format_ms(ms_since(t0))});
  emit_query(out, opt, f, v.to_string());
  return kOk;
}

inline int cmd_partition(const Options& opt, const std::string& n_str, const std::string& p_str,
                         std::ostream& out) {
  const auto t0 = Clock::now();
  const Nat n = Nat::parse(n_str);
  const Prime p = parse_prime(p_str);
  EngineSession s(opt, n);
  const PartitionSums r = partition(s.engine(), n, p);
  s.persist();
  std::vector<Field> f{{"query", "partition"},          {"n", n.to_string()},
                       {"p", p.value().to_string()},    {"psi", r.psi.to_string()},
                       {"upsilon", r.upsilon.to_string()}, {"delta", r.delta.to_string()}};
  if (opt.timings) f.push_back({"elapsed_ms", format_ms(ms_since(t0))});
  emit_query(out, opt, f,
             "psi=" + r.psi.to_string() + " upsilon=" + r.upsilon.to_string() +
                 " delta=" + r.delta.to_string());
  return kOk;
}

inline void write_report(std::ostream& out, const Options& opt, const VerifyReport& r) {
  std::string primes;
  for (const auto& p : r.config.primes) primes += (primes.empty() ? "" : ",") + p.value().to_string();
  std::string checks;
  for (Check c : r.config.checks) checks += (checks.empty() ? "" : ",") + std::string(check_name(c));

  switch (opt.format) {
    case Format::text: {
      out << "verify max_n=" << r.config.max_n << " primes=" << primes << " checks=" << checks
          << " jobs=" << r.config.jobs << '\n';
      for (const auto& c : r.checks) {
        out << std::left << std::setw(18) << c.name << " run=" << c.cases_run
            << " failed=" << c.cases_failed;
        if (c.informational) out << " (errata, informational)";
        if (c.first_failure) {
          const auto& f = *c.first_failure;
          out << " first: n=" << f.n;
          if (!f.p.is_zero()) out << " p=" << f.p;
          out << " expected=" << f.expected << " got=" << f.got;
        }
        out << '\n';
      }
      if (opt.timings) out << "elapsed_ms=" << format_ms(r.elapsed_ms) << '\n';
      out << (r.ok() ? "PASS" : "FAIL") << '\n';
      break;
    }
    case Format::json: {
      nlohmann::ordered_json j;
      j["config"]["max_n"] = std::to_string(r.config.max_n);
      auto& jp = j["config"]["primes"] = nlohmann::ordered_json::array();
      for (const auto& p : r.config.primes) jp.push_back(p.value().to_string());
      auto& jc = j["config"]["checks"] = nlohmann::ordered_json::array();
      for (Check c : r.config.checks) jc.push_back(std::string(check_name(c)));
      j["config"]["jobs"] = r.config.jobs;
      auto& arr = j["checks"] = nlohmann::ordered_json::array();
      for (const auto& c : r.checks) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["cases_run"] = std::to_string(c.cases_run);
        e["cases_failed"] = std::to_string(c.cases_failed);
        e["informational"] = c.informational;
        if (c.first_failure) {
          const auto& f = *c.first_failure;
          e["first_failure"] = {{"n", f.n.to_string()},
                                {"p", f.p.to_string()},
                                {"expected", f.expected.to_string()},
                                {"got", f.got.to_string()}};
        } else {
          e["first_failure"] = nullptr;
        }
        arr.push_back(std::move(e));
      }
      if (opt.timings) j["elapsed_ms"] = format_ms(r.elapsed_ms);
      j["ok"] = r.ok();
      out << j.dump() << '\n';
      break;
    }
    case Format::csv: {
      out << "check,cases_run,cases_failed,informational,first_n,first_p,expected,got\n";
      for (const auto& c : r.checks) {
        out << c.name << ',' << c.cases_run << ',' << c.cases_failed << ','
            << (c.informational ? "true" : "false") << ',';
        if (c.first_failure) {
          const auto& f = *c.first_failure;
          out << f.n << ',' << f.p << ',' << f.expected << ',' << f.got;
        } else {
          out << ",,,";
        }
        out << '\n';
      }
      break;
    }
  }
}

inline int cmd_verify(const Options& opt, const std::string& max_n, const std::string& primes,
                      const std::string& checks, unsigned jobs, std::ostream& out) {
  VerifyConfig cfg;
  cfg.max_n = Nat::parse(max_n).to_u64();
  cfg.sieve_cap = opt.sieve_cap;
  cfg.jobs = jobs;
  for (const auto& s : split_csv(primes)) cfg.primes.push_back(parse_prime(s));
  if (!checks.empty() && checks != "all") {
    cfg.checks.clear();
    for (const auto& s : split_csv(checks)) cfg.checks.push_back(parse_check(s));
  }
  const VerifyReport report = verify_suite(cfg);
  write_report(out, opt, report);
  return report.ok() ? kOk : kVerifyFailed;
}

struct BenchRow {
  std::string method;
  Nat value;
  double elapsed_ms = 0;
  std::uint64_t threshold = 0;
  std::size_t memo_entries = 0;
  std::uint64_t memo_hits = 0;
};

inline int cmd_bench(const Options& opt, const std::string& n_str, const std::string& p_str,
                     const std::string& methods, std::ostream& out) {
  const Nat n = Nat::parse(n_str);
  if (n.is_zero()) fail(ErrorKind::domain, "bench: n must be >= 1");
  const Prime p = parse_prime(p_str);

  std::vector<BenchRow> rows;
  for (const auto& m : split_csv(methods)) {
    if (m != "theorem" && m != "recursive" && m != "brute")
      fail(ErrorKind::parse, "unknown bench method '" + m + "'");
    BenchRow row;
    row.method = m;
    const auto t0 = Clock::now();
    if (m == "brute") {
      const PhiTable t = phi_sieve(n, opt.sieve_cap);
      row.value = delta_bruteforce(t, n, p);
      row.threshold = t.limit();
    } else {
      const Nat target = floor_div(n, p.value());
      require_psi_range(target);
      SummatoryEngine engine =
          build_engine(Nat(default_threshold(target, opt.sieve_cap)), opt.sieve_cap);
      row.value = m == "theorem" ? delta_theorem(engine, n, p) : delta_recursive(engine, n, p);
      row.threshold = engine.threshold();
      row.memo_entries = engine.memo_size();
      row.memo_hits = engine.stats().hits;
    }
    row.elapsed_ms = ms_since(t0);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorKind::parse, "bench: no method given");
  const bool agree = std::all_of(rows.begin(), rows.end(),
                                 [&](const BenchRow& r) { return r.value == rows.front().value; });

  switch (opt.format) {
    case Format::text:
      for (const auto& r : rows)
        out << "method=" << r.method << " n=" << n << " p=" << p.value() << " value=" << r.value
            << " elapsed_ms=" << format_ms(r.elapsed_ms) << " threshold=" << r.threshold
            << " memo_entries=" << r.memo_entries << " memo_hits=" << r.memo_hits << '\n';
      out << "agree=" << (agree ? "true" : "false") << '\n';
      break;
    case Format::json: {
      nlohmann::ordered_json j;
      j["n"] = n.to_string();
      j["p"] = p.value().to_string();
      auto& arr = j["runs"] = nlohmann::ordered_json::array();
      for (const auto& r : rows)
        arr.push_back({{"method", r.method},
                       {"value", r.value.to_string()},
                       {"elapsed_ms", format_ms(r.elapsed_ms)},
                       {"threshold", std::to_string(r.threshold)},
                       {"memo_entries", std::to_string(r.memo_entries)},
                       {"memo_hits", std::to_string(r.memo_hits)}});
      j["agree"] = agree;
      out << j.dump() << '\n';
      break;
    }
    case Format::csv:
      out << "method,n,p,value,elapsed_ms,threshold,memo_entries,memo_hits\n";
      for (const auto& r : rows)
        out << r.method << ',' << n << ',' << p.value() << ',' << r.value << ','
            << format_ms(r.elapsed_ms) << ',' << r.threshold << ',' << r.memo_entries << ','
            << r.memo_hits << '\n';
      break;
  }
  return agree ? kOk : kVerifyFailed;
}

/// Entry point. Results go to `out`, diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact totient sums: phi, Psi, and the prime partition Psi = Upsilon + Delta",
               "totsum"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  std::string format = "text";
  if (const char* env = std::getenv("TOTSUM_CACHE")) opt.cache = env;
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--cache", opt.cache, "Psi memo cache file (default: $TOTSUM_CACHE)");
  app.add_option("--sieve-cap", opt.sieve_cap, "Largest phi table, in entries")
      ->check(CLI::PositiveNumber);
  app.add_flag("--timings", opt.timings, "Include elapsed time in query output");

  std::string n_arg, p_arg, method;
  std::function<int()> action;

  auto* phi_cmd = app.add_subcommand("phi", "Euler's totient phi(n)");
  phi_cmd->add_option("n", n_arg)->required();
  phi_cmd->callback([&] { action = [&] { return cmd_phi(opt, n_arg, out); }; });

  auto* psi_cmd = app.add_subcommand("psi", "Psi(n) = phi(1) + ... + phi(n)");
  psi_cmd->add_option("n", n_arg)->required();
  std::string psi_method = "auto";
  psi_cmd->add_option("--method", psi_method)
      ->check(CLI::IsMember({"auto", "sieve", "sublinear"}));
  psi_cmd->callback([&] { action = [&] { return cmd_psi(opt, n_arg, psi_method, out); }; });

  auto* delta_cmd = app.add_subcommand("delta", "Delta(n, p): sum of phi(k) over multiples of p");
  delta_cmd->add_option("n", n_arg)->required();
  delta_cmd->add_option("p", p_arg)->required();
  std::string delta_method = "theorem";
  delta_cmd->add_option("--method", delta_method)
      ->check(CLI::IsMember({"theorem", "recursive", "brute"}));
  delta_cmd->callback(
      [&] { action = [&] { return cmd_delta(opt, n_arg, p_arg, delta_method, out); }; });

  auto* ups_cmd = app.add_subcommand("upsilon", "Upsilon(n, p): sum of phi(k) over k coprime to p");
  ups_cmd->add_option("n", n_arg)->required();
  ups_cmd->add_option("p", p_arg)->required();
  ups_cmd->callback([&] { action = [&] { return cmd_upsilon(opt, n_arg, p_arg, out); }; });

  auto* part_cmd = app.add_subcommand("partition", "Psi(n), Upsilon(n, p) and Delta(n, p)");
  part_cmd->add_option("n", n_arg)->required();
  part_cmd->add_option("p", p_arg)->required();
  part_cmd->callback([&] { action = [&] { return cmd_partition(opt, n_arg, p_arg, out); }; });

  auto* verify_cmd = app.add_subcommand("verify", "Sweep the identity checks over a range");
  std::string max_n, primes, checks = "all";
  unsigned jobs = 1;
  verify_cmd->add_option("--max-n", max_n)->required();
  verify_cmd->add_option("--primes", primes)->required();
  verify_cmd->add_option("--checks", checks,
                         "csv of eq2,thm,eq4,remark,prop1,prop3,psi-oracle (default all)");
  verify_cmd->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  verify_cmd->callback(
      [&] { action = [&] { return cmd_verify(opt, max_n, primes, checks, jobs, out); }; });

  auto* bench_cmd = app.add_subcommand("bench", "Time Delta(n, p) by one or more methods");
  std::string bench_methods = "theorem,recursive";
  bench_cmd->add_option("--n", n_arg)->required();
  bench_cmd->add_option("--p", p_arg)->required();
  bench_cmd->add_option("--method", bench_methods, "csv of theorem,recursive,brute");
  bench_cmd->callback(
      [&] { action = [&] { return cmd_bench(opt, n_arg, p_arg, bench_methods, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }
  opt.format = format == "json" ? Format::json : format == "csv" ? Format::csv : Format::text;

  try {
    return action();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kOverflow;
  }
}

}  // namespace totsum::cli
