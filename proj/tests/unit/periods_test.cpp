#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_support.hpp"
#include "toeplitz/periods.hpp"

using namespace toeplitz;
using namespace toeplitz::fixtures;

namespace {

std::shared_ptr<const ToeplitzArray> eta(const std::string& preset, std::size_t depth) {
  return std::make_shared<ToeplitzArray>(preset_skeleton(preset, depth));
}

CosetSet random_set(std::mt19937_64& rng, std::size_t level, std::uint64_t size) {
  CosetSet s{level, {}};
  for (std::uint64_t i = 0; i < size; ++i) {
    if (rng() % 3 == 0) s.members.push_back(i);
  }
  return s;
}

}  // namespace

TEST(PeriodSets, ThreeadicCounts) {
  auto s = preset_skeleton("threeadic", 5);
  // a-counts from the oracle: (zeros, ones) = (9, 10) at n = 3 and (34, 31) at n = 4
  EXPECT_EQ(per_set(*s, 3, 0).size(), 9u);
  EXPECT_EQ(per_set(*s, 3, 1).size(), 10u);
  EXPECT_EQ(per_set(*s, 4, 0).size(), 34u);
  EXPECT_EQ(per_set(*s, 4, 1).size(), 31u);
  EXPECT_EQ(ints(coset_elements(s->tower(), per_set(*s, 2, 1))), (std::vector<std::int64_t>{0, 3, 6}));
}

TEST(PeriodSets, PerEqHoldsOnPresets) {
  auto x = eta("threeadic", 5);
  for (std::size_t n = 1; n <= 5; ++n) {
    const CheckResult r = per_eq_check(*x, n);
    EXPECT_TRUE(r.passed()) << n << ": " << r.counterexample.value_or("");
  }
  EXPECT_EQ(per_eq_check(*x, 4).scope.rfind("exhaustive D_4", 0), 0u);
  auto c = eta("threeadic-centered", 5);
  for (std::size_t n = 1; n <= 5; ++n) EXPECT_TRUE(per_eq_check(*c, n).passed());
}

TEST(PeriodSets, PerEqNegativeControlFlipsOnePoint) {
  auto base = eta("threeadic", 5);
  const PointFlipArray flipped(base, Element({4}));
  const CheckResult r = per_eq_check(flipped, 3);
  ASSERT_TRUE(r.failed());
  ASSERT_TRUE(r.counterexample.has_value());
  // replaying reproduces the same counterexample
  EXPECT_EQ(per_eq_check(flipped, 3).counterexample, r.counterexample);
  EXPECT_NE(r.counterexample->find("4"), std::string::npos);
}

TEST(PeriodSets, ConstantArrayIsNotToeplitzStructured) {
  auto t = build_tower(line_config({3, 3, 3, 3}));
  const ConstantArray zero(t, 0);
  EXPECT_EQ(zero.per_set(2, 0).size(), 9u);
  EXPECT_EQ(zero.per_set(2, 1).size(), 0u);
  EXPECT_TRUE(per_eq_check(zero, 2).failed());
  EXPECT_TRUE(essential_check(zero, 2).failed());
}

TEST(PeriodSets, EssentialOnThreeadic) {
  auto x = eta("threeadic", 5);
  for (std::size_t n = 1; n <= 5; ++n) EXPECT_TRUE(essential_check(*x, n).passed()) << n;
}

TEST(PeriodSets, PlantedCosetsMakeUpPerOne) {
  auto s = preset_skeleton("threeadic", 6);
  for (std::size_t n = 1; n <= 6; ++n) EXPECT_TRUE(per1_structure_check(*s, n).passed()) << n;
}

TEST(PeriodSets, PeriodizedArrayIsFullyPeriodic) {
  auto s = preset_skeleton("threeadic", 5);
  const PeriodizedArray p(s, 3);
  const auto all = coset_union(p.per_set(3, 0), p.per_set(3, 1));
  EXPECT_EQ(all.size(), 27u);
  for (long g = -60; g < 60; ++g) EXPECT_EQ(p.value(Element({g})), s->eval(s->tower().reduce(Element({g}), 3)));
}

TEST(PeriodSets, AuxiliarCoverOnThreeadic) {
  auto s = preset_skeleton("threeadic", 5);
  const QuotientTower& t = s->tower();
  std::size_t covered = 0;
  for (std::size_t i = 1; i <= 3; ++i) {
    for (const Element& gamma : t.subgroup_domain(i, i + 2)) {
      const CoverResult c = auxiliar_cover_check(*s, i, gamma);
      ASSERT_FALSE(c.check.failed()) << c.check.counterexample.value_or("");
      covered += c.level ? 1 : 0;
    }
  }
  EXPECT_GT(covered, 0u);
}

TEST(PartitionsC, AtMostOneOnePerTranslate) {
  auto s = preset_skeleton("threeadic", 6);
  for (std::size_t k = 1; k <= 3; ++k) {
    const CheckResult r = partitions_c_check(*s, k, 2, 2000, 6, 99 + k);
    EXPECT_TRUE(r.passed()) << r.counterexample.value_or("");
    EXPECT_EQ(r.witnesses.back(), "violations=0");
  }
}

TEST(PartitionsC, VisitCountsOneTranslate) {
  auto s = preset_skeleton("threeadic", 5);
  const JSet j1 = j_set(s->tower(), 1);
  PartitionsCStats st;
  partitions_c_visit(*s, 1, j1, Element({3}), st);  // eta(4) = 1, eta(5) = 0
  EXPECT_EQ(st.violations, 0u);
  EXPECT_EQ(st.translates, 1u);
}

TEST(CosetSetProperty, BooleanAlgebraLaws) {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 200; ++trial) {
    const CosetSet a = random_set(rng, 3, 27), b = random_set(rng, 3, 27), c = random_set(rng, 3, 27);
    ASSERT_EQ(coset_union(a, b), coset_union(b, a));
    ASSERT_EQ(coset_intersection(a, coset_union(b, c)),
              coset_union(coset_intersection(a, b), coset_intersection(a, c)));
    ASSERT_EQ(coset_difference(coset_union(a, b), b), coset_difference(a, b));
    ASSERT_TRUE(coset_intersection(coset_difference(a, b), b).members.empty());
  }
}

TEST(CosetSetProperty, TranslateAndLift) {
  auto t = build_tower(line_config({3, 3, 3, 3}));
  std::mt19937_64 rng(707);
  for (int trial = 0; trial < 100; ++trial) {
    const CosetSet a = random_set(rng, 2, 9);
    const Element g({static_cast<long>(rng() % 200) - 100});
    const CosetSet moved = coset_translate(*t, a, g);
    ASSERT_EQ(moved.size(), a.size());
    ASSERT_EQ(coset_translate(*t, moved, t->inv(g)), a);
    const CosetSet lifted = coset_lift(*t, a, 4);
    ASSERT_EQ(lifted.size(), a.size() * 9);
    for (const Element& e : coset_elements(*t, lifted)) ASSERT_TRUE(coset_contains(*t, a, e));
  }
}
