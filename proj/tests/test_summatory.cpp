#include <totsum/summatory.hpp>

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

using totsum::ErrorKind;
using totsum::Nat;
using totsum::SummatoryEngine;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const totsum::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected totsum::Error";
  return ErrorKind::io;
}

class TempFile {
 public:
  explicit TempFile(const std::string& name)
      : path_(std::filesystem::temp_directory_path() /
              (name + "-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
               "-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)))) {}
  ~TempFile() { std::filesystem::remove(path_); }
  const std::filesystem::path& path() const { return path_; }
  void write(const std::string& content) const { std::ofstream(path_) << content; }
  std::string read() const {
    std::ifstream in(path_);
    return {std::istreambuf_iterator<char>(in), {}};
  }

 private:
  std::filesystem::path path_;
};

}  // namespace

TEST(BuildEngine, PrefixExamples) {
  EXPECT_EQ(totsum::build_engine(10).sieve_prefix(10), 32u);
  EXPECT_EQ(totsum::build_engine(1).sieve_prefix(1), 1u);
  EXPECT_EQ(totsum::build_engine(2).sieve_prefix(2), 2u);
  EXPECT_EQ(kind_of([] { totsum::build_engine(0); }), ErrorKind::domain);
  EXPECT_EQ(kind_of([] { totsum::build_engine(1000, 999); }), ErrorKind::resource);
}

TEST(BuildEngine, PrefixStrictlyIncreasing) {
  const auto e = totsum::build_engine(100000);
  EXPECT_EQ(e.sieve_prefix(0), 0u);
  for (std::uint64_t k = 1; k <= 100000; ++k) ASSERT_LT(e.sieve_prefix(k - 1), e.sieve_prefix(k));
}

TEST(Psi, Examples) {
  auto e = totsum::build_engine(1);  // force the recurrence for everything above 1
  EXPECT_EQ(e.psi(10), Nat(32));
  EXPECT_EQ(e.psi(0), Nat(0));
  EXPECT_EQ(e.psi(9), Nat(28));
  EXPECT_EQ(e.psi(100), Nat(3044));
  // recurrence read directly: 5050 - sum_{d=2}^{100} Psi(100/d)
  Nat rest = 0;
  for (std::uint64_t d = 2; d <= 100; ++d) rest += e.psi(100 / d);
  EXPECT_EQ(Nat(5050) - rest, Nat(3044));
}

TEST(PsiBruteforce, Examples) {
  EXPECT_EQ(totsum::psi_bruteforce(1), Nat(1));
  EXPECT_EQ(totsum::psi_bruteforce(10), Nat(32));
  EXPECT_EQ(totsum::psi_bruteforce(5), Nat(10));
  EXPECT_EQ(totsum::psi_bruteforce(0), Nat(0));
  EXPECT_EQ(kind_of([] { totsum::psi_bruteforce(1000, 10); }), ErrorKind::resource);
}

TEST(Psi, MatchesCoprimeCountOracle) {
  std::vector<std::uint64_t> phi(3001, 0);
  for (std::uint64_t k = 1; k <= 3000; ++k) phi[k] = oracle::phi_count(k);
  auto e = totsum::build_engine(7);
  for (std::uint64_t n = 0; n <= 3000; ++n)
    ASSERT_EQ(e.psi(n), Nat(oracle::prefix_sum(phi, n))) << n;
}

TEST(Psi, OracleEquivalenceAcrossThresholds) {
  const auto gauss = oracle::phi_gauss_table(200000);
  std::vector<std::uint64_t> prefix(gauss.size(), 0);
  for (std::size_t k = 1; k < gauss.size(); ++k) prefix[k] = prefix[k - 1] + gauss[k];
  for (std::uint64_t threshold : {1, 2, 50, 1000}) {
    auto e = totsum::build_engine(threshold);
    for (std::uint64_t n = 0; n <= 20000; ++n) ASSERT_EQ(e.psi(n), Nat(prefix[n])) << n;
    std::mt19937_64 rng(threshold);
    for (int i = 0; i < 50; ++i) {
      const std::uint64_t n = rng() % 200001;
      ASSERT_EQ(e.psi(n), Nat(prefix[n])) << n;
    }
  }
}

TEST(Psi, HyperbolaIdentity) {
  auto e = totsum::build_engine(30);
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    Nat s = 0;
    for (std::uint64_t d = 1; d <= n; ++d) s += e.psi(n / d);
    ASSERT_EQ(s, totsum::triangular(n)) << n;
  }
}

TEST(Psi, MonotoneAndDeterministic) {
  auto warm = totsum::build_engine(100);
  Nat prev = warm.psi(0);
  for (std::uint64_t n = 1; n <= 5000; ++n) {
    const Nat v = warm.psi(n);
    ASSERT_LT(prev, v);
    prev = v;
  }
  const Nat big = Nat(1'000'000'000ULL);
  const Nat a = warm.psi(big);
  const Nat b = warm.psi(big);
  auto cold = totsum::build_engine(100);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, cold.psi(big));
  EXPECT_EQ(a, totsum::build_engine(100000).psi(big));
}

TEST(Psi, AsymptoticSmoke) {
  auto e = totsum::build_engine(10000);
  const Nat v = e.psi(1'000'000);
  EXPECT_EQ(v, Nat(303963552392ULL));
  const double approx = 3e12 / (std::numbers::pi * std::numbers::pi);
  EXPECT_LT(std::abs(static_cast<double>(v.to_u64()) - approx) / 1e12, 0.01);
}

TEST(Psi, OverflowWhenTriangularExceedsRange) {
  auto e = totsum::build_engine(10);
  EXPECT_EQ(kind_of([&] { e.psi(Nat::parse("100000000000000000000")); }), ErrorKind::overflow);
  EXPECT_EQ(kind_of([] { totsum::require_psi_range(Nat::parse("26087635650665564425")); }),
            ErrorKind::overflow);
}

TEST(Psi, ForkSharesTablesNotMemo) {
  auto e = totsum::build_engine(10);
  (void)e.psi(5000);
  auto f = e.fork();
  EXPECT_EQ(f.memo_size(), 0u);
  EXPECT_EQ(f.threshold(), 10u);
  EXPECT_EQ(&f.table(), &e.table());
  EXPECT_EQ(f.psi(5000), e.psi(5000));
}

TEST(Cache, SaveThenLoadAnswersFromMemo) {
  TempFile file("totsum-cache");
  auto first = totsum::build_engine(1000);
  const Nat v = first.psi(1'000'000);
  first.save_cache(file.path());

  const std::string text = file.read();
  EXPECT_EQ(text.rfind("n,psi\n", 0), 0u);
  EXPECT_NE(text.find("\n1000000,303963552392\n"), std::string::npos);

  auto second = totsum::build_engine(1000);
  second.load_cache(file.path());
  EXPECT_EQ(second.memo_size(), first.memo_size());
  EXPECT_EQ(second.psi(1'000'000), v);
  EXPECT_EQ(second.stats().hits, 1u);
  EXPECT_EQ(second.stats().computed, 0u);
}

TEST(Cache, EmptyFileAndHeaderOnly) {
  TempFile file("totsum-empty");
  file.write("");
  auto e = totsum::build_engine(10);
  e.load_cache(file.path());
  EXPECT_EQ(e.memo_size(), 0u);
  file.write("n,psi\n");
  e.load_cache(file.path());
  EXPECT_EQ(e.memo_size(), 0u);
}

TEST(Cache, PreloadedEntryServesQuery) {
  TempFile file("totsum-line");
  file.write("n,psi\n10,32\n");
  auto e = totsum::build_engine(1);
  e.load_cache(file.path());
  EXPECT_EQ(e.memo_size(), 1u);
  EXPECT_EQ(e.psi(10), Nat(32));
  EXPECT_EQ(e.stats().hits, 1u);
}

TEST(Cache, SieveRangeEntriesAreCheckedNotStored) {
  TempFile file("totsum-sieve");
  file.write("n,psi\n10,32\n");
  auto e = totsum::build_engine(100);
  e.load_cache(file.path());
  EXPECT_EQ(e.memo_size(), 0u);

  file.write("n,psi\n10,33\n");
  try {
    e.load_cache(file.path());
    FAIL() << "expected a malformed-file error";
  } catch (const totsum::Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::parse);
    EXPECT_NE(std::string(err.what()).find(":2:"), std::string::npos) << err.what();
  }
}

TEST(Cache, MalformedFilesReportLineNumbers) {
  TempFile file("totsum-bad");
  auto expect_bad_line = [&](const std::string& content, const std::string& line) {
    file.write(content);
    auto e = totsum::build_engine(1);
    try {
      e.load_cache(file.path());
      ADD_FAILURE() << "accepted: " << content;
    } catch (const totsum::Error& err) {
      EXPECT_EQ(err.kind(), ErrorKind::parse);
      EXPECT_NE(std::string(err.what()).find(":" + line + ":"), std::string::npos) << err.what();
    }
    EXPECT_EQ(e.memo_size(), 0u);
  };
  expect_bad_line("psi,n\n", "1");
  expect_bad_line("n,psi\n10,32\n9\n", "3");
  expect_bad_line("n,psi\n10,32\n5,10\n", "3");
  expect_bad_line("n,psi\n10,32\n10,32\n", "3");
  expect_bad_line("n,psi\n10,x\n", "2");
  expect_bad_line("n,psi\n10,32\n20,-4\n", "3");
}

TEST(Cache, MissingFileIsAnIoError) {
  auto e = totsum::build_engine(1);
  EXPECT_EQ(kind_of([&] { e.load_cache("/nonexistent/dir/cache.csv"); }), ErrorKind::io);
  EXPECT_EQ(kind_of([&] { e.save_cache("/nonexistent/dir/cache.csv"); }), ErrorKind::io);
}
