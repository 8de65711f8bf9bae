#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "test_support.hpp"
#include "toeplitz/errors.hpp"
#include "toeplitz/verify.hpp"

using namespace toeplitz;
using namespace toeplitz::fixtures;

namespace {

VerifyContext context(const std::string& preset, std::size_t depth) {
  VerifyContext ctx;
  ctx.skel = preset_skeleton(preset, depth);
  ctx.samples = 2000;
  return ctx;
}

nlohmann::json without_timing(nlohmann::json j) {
  for (auto& c : j["checks"]) c.erase("millis");
  return j;
}

}  // namespace

TEST(Registry, ListsEveryCheckOnce) {
  const std::vector<std::string> names = check_names();
  EXPECT_EQ(names.size(), 24u);
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), names.size());
  for (const std::string expected : {"per-eq", "essential", "decom", "good-ds", "t1t2", "uns-bound", "z-identity",
                                     "pimap", "linking", "an-det", "good-relation", "no-empty"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), expected), names.end()) << expected;
  }
  for (const CheckInfo& c : check_registry()) EXPECT_FALSE(c.statement.empty()) << c.name;
}

TEST(Registry, UnknownNameThrows) {
  EXPECT_THROW(run_check(context("threeadic", 3), "no-such-check"), UnknownCheck);
}

TEST(GoodRelation, CountsMatchOracle) {
  auto s = preset_skeleton("threeadic", 5);
  const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> expected{
      {0, 2, 2}, {0, 3, 4}, {0, 4, 8}, {0, 5, 16}, {1, 3, 2}, {1, 4, 4}, {1, 5, 8}, {2, 4, 2}, {2, 5, 4}};
  for (const auto& [n, m, count] : expected) {
    const GoodRelation g = good_relation(s->tower(), n, m);
    EXPECT_EQ(g.count(), count) << n << "," << m;
    EXPECT_FALSE(g.containment_failure.has_value());
    EXPECT_GE(Rational(g.count()), g.bound);
  }
  EXPECT_EQ(ints(good_relation(s->tower(), 1, 4).qualifying), (std::vector<std::int64_t>{36, 45, 63, 72}));
  EXPECT_ANY_THROW(good_relation(s->tower(), 2, 3));
}

TEST(Suite, ThreeadicHasNoFailures) {
  const SuiteReport r = run_all(context("threeadic", 5));
  EXPECT_EQ(r.results.size(), 24u);
  EXPECT_EQ(r.failed, 0u);
  std::set<std::string> vacated;
  for (const CheckResult& c : r.results) {
    EXPECT_FALSE(c.failed()) << c.name << ": " << c.counterexample.value_or("");
    if (c.status == CheckStatus::Vacated) vacated.insert(c.name);
  }
  EXPECT_EQ(vacated, (std::set<std::string>{"linking", "u-in-y", "measure-1-trend", "no-empty"}));
  EXPECT_EQ(r.passed + r.failed + r.inconclusive + r.vacated, r.results.size());
}

TEST(Suite, SeededRunsAreDeterministic) {
  const VerifyContext ctx = context("threeadic", 4);
  for (const std::string name : {"pimap", "partitions-c", "per-eq"}) {
    EXPECT_EQ(without_timing(nlohmann::json{{"checks", {to_json(run_check(ctx, name))}}}),
              without_timing(nlohmann::json{{"checks", {to_json(run_check(ctx, name))}}}))
        << name;
  }
}

TEST(Suite, ShallowSkeletonLeavesOrbitChecksInconclusive) {
  const SuiteReport r = run_all(context("threeadic", 1));
  EXPECT_EQ(r.failed, 0u);
  for (const CheckResult& c : r.results) {
    if (c.name == "good-patches" || c.name == "t1t2" || c.name == "good-ds" || c.name == "u-in-y" ||
        c.name == "y-in-z" || c.name == "uns-bound") {
      EXPECT_EQ(c.status, CheckStatus::Inconclusive) << c.name;
    }
  }
}

TEST(Suite, PerEqScopeIsExhaustive) {
  VerifyContext ctx = context("threeadic", 5);
  ctx.max_level = 4;
  const CheckResult r = run_check(ctx, "per-eq");
  EXPECT_TRUE(r.passed());
  EXPECT_NE(r.scope.find("exhaustive D_4"), std::string::npos) << r.scope;
}
