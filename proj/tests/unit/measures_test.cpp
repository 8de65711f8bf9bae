#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "toeplitz/errors.hpp"
#include "toeplitz/measures.hpp"

using namespace toeplitz;
using namespace toeplitz::fixtures;

namespace {

Rational q(long a, long b) { return make_rational(a, b); }

void expect_counts(const ToeplitzSkeleton& s, std::size_t n, long a0, long a1, long j) {
  const ACounts c = a_counts(s, n);
  EXPECT_EQ(c.a0, a0) << "n=" << n;
  EXPECT_EQ(c.a1, a1) << "n=" << n;
  EXPECT_EQ(c.j_size, j) << "n=" << n;
  EXPECT_EQ(c.a0 + c.a1 + c.j_size, c.domain);
  const auto e = a_counts_enumerated(s, n);
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(e->a0, c.a0);
  EXPECT_EQ(e->a1, c.a1);
}

Pattern pattern(const std::vector<long>& support, const std::vector<int>& values) {
  Pattern p;
  for (long s : support) p.support.push_back(Element({s}));
  p.values = values;
  return p;
}

}  // namespace

TEST(ACounts, MatchOracle) {
  auto three = preset_skeleton("threeadic", 6);
  expect_counts(*three, 1, 0, 1, 2);
  expect_counts(*three, 2, 2, 3, 4);
  expect_counts(*three, 3, 9, 10, 8);
  expect_counts(*three, 4, 34, 31, 16);
  expect_counts(*three, 5, 118, 93, 32);
  auto mixed = line_skeleton({2, 3, 2, 3, 2}, 4);
  expect_counts(*mixed, 1, 0, 1, 1);
  expect_counts(*mixed, 2, 1, 3, 2);
  expect_counts(*mixed, 3, 3, 7, 2);
  expect_counts(*mixed, 4, 11, 21, 4);
  auto irr = line_skeleton({15, 31, 3}, 2);
  expect_counts(*irr, 1, 0, 1, 14);
  expect_counts(*irr, 2, 14, 31, 420);
}

TEST(ACounts, DeterminantIsDomainSize) {
  auto s = preset_skeleton("threeadic", 6);
  for (std::size_t n = 1; n <= 6; ++n) EXPECT_TRUE(an_det_check(*s, n).passed()) << n;
  EXPECT_EQ(an_det_check(*s, 4).witnesses.front(), "A_4 = [[50,49],[31,32]], det = 81");
  auto irr = preset_skeleton("irregular-demo", 4);
  for (std::size_t n = 1; n <= 4; ++n) EXPECT_TRUE(an_det_check(*irr, n).passed()) << n;
}

TEST(Limit01, ThreeadicEnclosures) {
  auto s = preset_skeleton("threeadic", 6);
  const Limit01 l = limit_01(*s, regularity_verdict(s->tower()));
  EXPECT_EQ(l.zero.lo, q(448, 729));
  EXPECT_EQ(l.zero.hi, q(449, 729));
  EXPECT_EQ(l.one.lo, q(280, 729));
  EXPECT_EQ(l.one.hi, q(281, 729));
}

TEST(Limit01, InconclusiveTailThrows) {
  auto s = line_skeleton({3, 3, 3, 3}, 3);
  EXPECT_THROW(limit_01(*s, regularity_verdict(s->tower())), InconclusiveTail);
}

TEST(Subsequence, LevelsWithinTower) {
  EXPECT_EQ(subsequence_within_tower(*preset_skeleton("threeadic", 5)), (std::vector<std::size_t>{1, 4, 9}));
  EXPECT_EQ(subsequence_within_tower(*preset_skeleton("irregular-demo", 3)), (std::vector<std::size_t>{1}));
  EXPECT_EQ(subsequence_M(*preset_skeleton("threeadic", 5), 1), 4u);
  EXPECT_THROW(subsequence_M(*preset_skeleton("threeadic", 5), 2), DepthExceeded);
}

TEST(PeriodicMeasure, NeedsCompleteWindow) {
  auto s = preset_skeleton("threeadic", 5);
  EXPECT_THROW(PeriodicMeasure(s, 5), DepthExceeded);
  const PeriodicMeasure mu(s, 4);
  EXPECT_EQ(mu_cylinder(mu, pattern({0}, {1})), q(31, 81));
  EXPECT_EQ(mu_cylinder(mu, pattern({0, 1}, {1, 0})), q(27, 81));
}

TEST(PeriodicMeasure, ParsePattern) {
  const Pattern p = parse_pattern(nlohmann::json::parse(R"({"support": ["0", "1"], "values": [1, 0]})"));
  ASSERT_EQ(p.support.size(), 2u);
  EXPECT_EQ(p.support[1], Element({1}));
  EXPECT_EQ(p.values, (std::vector<int>{1, 0}));
  EXPECT_ANY_THROW(parse_pattern(nlohmann::json::parse(R"({"support": ["0"], "values": [1, 0]})")));
}

TEST(OrbitSets, UBoundOnThreeadic) {
  auto s = preset_skeleton("threeadic", 6);
  const PeriodicMeasure mu5(s, 5);
  EXPECT_EQ(mu_U(mu5, *s, 1), q(14, 81));
  EXPECT_EQ(uns_lower_bound(s->tower(), 1, 5), q(8, 243));
  EXPECT_GE(mu_U(mu5, *s, 1), uns_lower_bound(s->tower(), 1, 5));
}

TEST(OrbitSets, ZMeasureBound) {
  EXPECT_FALSE(z_measure_lower_bound(preset_skeleton("threeadic", 5)->tower(), 1).has_value());
  auto irr = build_tower(preset_config("irregular-demo"));
  EXPECT_EQ(*z_measure_lower_bound(*irr, 1), q(252960, 261121));
  for (std::size_t n = 2; n < irr->depth(); ++n) {
    EXPECT_GE(*z_measure_lower_bound(*irr, n), *z_measure_lower_bound(*irr, n - 1));
  }
}

TEST(OrbitSetsProperty, CnHoldsExactlyOnGammaN) {
  auto s = preset_skeleton("threeadic", 6);
  const OrbitOracle oracle(s);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::uint64_t i = 0; i < s->tower().enumerable_size(n); ++i) {
      const Element v = s->tower().element_at(n, i);
      const auto in = oracle.in_Cn(v, n);
      ASSERT_TRUE(in.has_value());
      EXPECT_EQ(*in, s->tower().is_identity(v)) << "v=" << v.to_string() << " n=" << n;
    }
  }
}

TEST(OrbitSetsProperty, CnSplitsIntoCn0AndCng) {
  auto s = preset_skeleton("threeadic", 6);
  const OrbitOracle oracle(s);
  ElementGen gen(s->tower(), 1001);
  const std::size_t n = 2;
  const JSet jn = j_set(s->tower(), n);
  for (int i = 0; i < 300; ++i) {
    const Element v = gen.in_subgroup(n, 5);
    const auto c = oracle.in_Cn(v, n);
    const auto c0 = oracle.in_Cn0(v, n);
    if (!c || !c0) continue;
    int parts = *c0 ? 1 : 0;
    for (const Element& g : jn.elements) {
      const auto cg = oracle.in_Cng(v, n, g);
      ASSERT_TRUE(cg.has_value());
      parts += *cg ? 1 : 0;
    }
    ASSERT_EQ(*c, true);
    ASSERT_EQ(parts, 1) << "v=" << v.to_string();
  }
}

TEST(PeriodicMeasureProperty, ShiftInvariance) {
  auto s = preset_skeleton("threeadic", 6);
  const PeriodicMeasure mu(s, 5);
  std::mt19937_64 rng(1102);
  for (int i = 0; i < 200; ++i) {
    std::vector<long> support;
    std::vector<int> values;
    const int len = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < len; ++k) {
      support.push_back(static_cast<long>(rng() % 40) - 20);
      values.push_back(static_cast<int>(rng() % 2));
    }
    const long shift = static_cast<long>(rng() % 500) - 250;
    std::vector<long> moved;
    for (long x : support) moved.push_back(x + shift);
    ASSERT_EQ(mu_cylinder(mu, pattern(support, values)), mu_cylinder(mu, pattern(moved, values)));
  }
}

TEST(PeriodicMeasureProperty, CylindersPartitionUnity) {
  auto s = preset_skeleton("threeadic-centered", 6);
  const PeriodicMeasure mu(s, 4);
  Rational total = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) total += mu_cylinder(mu, pattern({-1, 0, 5}, {a, b, c}));
  EXPECT_EQ(total, 1);
}
