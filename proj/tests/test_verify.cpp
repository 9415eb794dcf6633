#include <totsum/verify.hpp>

#include <gtest/gtest.h>

#include <algorithm>

using totsum::Check;
using totsum::Nat;
using totsum::Prime;
using totsum::VerifyConfig;
using totsum::VerifyReport;

namespace {

const totsum::CheckResult* find(const VerifyReport& r, const std::string& name) {
  auto it = std::find_if(r.checks.begin(), r.checks.end(),
                         [&](const auto& c) { return c.name == name; });
  return it == r.checks.end() ? nullptr : &*it;
}

}  // namespace

TEST(Verify, AllChecksPassForTwo) {
  VerifyConfig cfg;
  cfg.max_n = 100;
  cfg.primes = {Prime(2)};
  const auto r = totsum::verify_suite(cfg);
  EXPECT_TRUE(r.ok());
  for (const auto& c : r.checks) {
    EXPECT_GT(c.cases_run, 0u) << c.name;
    EXPECT_EQ(c.cases_failed, 0u) << c.name;
    EXPECT_EQ(c.cases_failed == 0, !c.first_failure.has_value()) << c.name;
  }
  for (const char* name : {"eq2", "thm", "eq4", "remark", "remark-as-printed", "remark-p2",
                           "prop1", "prop3", "psi-oracle"})
    EXPECT_NE(find(r, name), nullptr) << name;
  EXPECT_EQ(find(r, "thm")->cases_run, 100u);
  EXPECT_EQ(find(r, "psi-oracle")->cases_run, 100u);
}

TEST(Verify, RemarkErrataIsReportedButInformational) {
  VerifyConfig cfg;
  cfg.max_n = 10;
  cfg.primes = {Prime(3)};
  cfg.checks = {Check::remark};
  const auto r = totsum::verify_suite(cfg);
  EXPECT_TRUE(r.ok());
  const auto* corrected = find(r, "remark");
  const auto* printed = find(r, "remark-as-printed");
  ASSERT_NE(corrected, nullptr);
  ASSERT_NE(printed, nullptr);
  EXPECT_EQ(find(r, "remark-p2"), nullptr);
  EXPECT_EQ(corrected->cases_failed, 0u);
  EXPECT_TRUE(printed->informational);
  EXPECT_GT(printed->cases_failed, 0u);
  ASSERT_TRUE(printed->first_failure.has_value());
  EXPECT_EQ(printed->first_failure->n, Nat(3));
  EXPECT_EQ(printed->first_failure->p, Nat(3));
  EXPECT_EQ(printed->first_failure->expected, Nat(10));
  EXPECT_EQ(printed->first_failure->got, Nat(12));
  EXPECT_EQ(r.checks.size(), 2u);
}

TEST(Verify, SmallestRange) {
  VerifyConfig cfg;
  cfg.max_n = 1;
  cfg.primes = {Prime(2)};
  const auto r = totsum::verify_suite(cfg);
  EXPECT_TRUE(r.ok());
  for (const auto& c : r.checks) EXPECT_GE(c.cases_run, 1u);
}

TEST(Verify, JobsDoNotChangeTheReport) {
  VerifyConfig cfg;
  cfg.max_n = 3000;
  cfg.primes = {Prime(2), Prime(3), Prime(5), Prime(97)};
  const auto one = totsum::verify_suite(cfg);
  for (unsigned jobs : {2u, 3u, 7u}) {
    cfg.jobs = jobs;
    const auto many = totsum::verify_suite(cfg);
    ASSERT_EQ(many.checks.size(), one.checks.size());
    for (std::size_t i = 0; i < one.checks.size(); ++i) {
      const auto& a = one.checks[i];
      const auto& b = many.checks[i];
      EXPECT_EQ(a.name, b.name);
      EXPECT_EQ(a.cases_run, b.cases_run) << a.name;
      EXPECT_EQ(a.cases_failed, b.cases_failed) << a.name;
      ASSERT_EQ(a.first_failure.has_value(), b.first_failure.has_value()) << a.name;
      if (a.first_failure) {
        EXPECT_EQ(a.first_failure->n, b.first_failure->n);
        EXPECT_EQ(a.first_failure->p, b.first_failure->p);
      }
    }
  }
}

TEST(Verify, RejectsBadConfigs) {
  VerifyConfig cfg;
  cfg.max_n = 10;
  EXPECT_THROW(totsum::verify_suite(cfg), totsum::Error);  // no primes
  cfg.primes = {Prime(2)};
  cfg.max_n = 0;
  EXPECT_THROW(totsum::verify_suite(cfg), totsum::Error);
  cfg.max_n = 1000;
  cfg.sieve_cap = 999;
  try {
    totsum::verify_suite(cfg);
    FAIL();
  } catch (const totsum::Error& e) {
    EXPECT_EQ(e.kind(), totsum::ErrorKind::resource);
  }
}

TEST(Verify, CheckNamesRoundTrip) {
  for (Check c : totsum::kAllChecks) EXPECT_EQ(totsum::parse_check(totsum::check_name(c)), c);
  EXPECT_THROW(totsum::parse_check("eq3"), totsum::Error);
}
