#include <gtest/gtest.h>

#include "test_support.hpp"
#include "toeplitz/errors.hpp"
#include "toeplitz/skeleton.hpp"

using namespace toeplitz;
using namespace toeplitz::fixtures;

namespace {

std::vector<int> window_values(const ToeplitzSkeleton& s, std::size_t n) {
  std::vector<int> out;
  const QuotientTower& t = s.tower();
  for (std::uint64_t i = 0; i < t.enumerable_size(n); ++i) out.push_back(s.eval(t.element_at(n, i)).value_or(-1));
  return out;
}

std::vector<std::int64_t> j_of(const QuotientTower& t, std::size_t n) { return ints(j_set(t, n).elements); }

}  // namespace

// Expected values below are frozen output of tests/oracle/brute_force.py.

TEST(JSets, ThreeadicMatchesOracle) {
  auto s = preset_skeleton("threeadic", 5);
  const QuotientTower& t = s->tower();
  EXPECT_EQ(j_of(t, 0), (std::vector<std::int64_t>{0}));
  EXPECT_EQ(j_of(t, 1), (std::vector<std::int64_t>{1, 2}));
  EXPECT_EQ(j_of(t, 2), (std::vector<std::int64_t>{4, 5, 7, 8}));
  EXPECT_EQ(j_of(t, 3), (std::vector<std::int64_t>{13, 14, 16, 17, 22, 23, 25, 26}));
}

TEST(JSets, CenteredMatchesOracle) {
  auto s = preset_skeleton("threeadic-centered", 5);
  const QuotientTower& t = s->tower();
  EXPECT_EQ(j_of(t, 1), (std::vector<std::int64_t>{-1, 1}));
  EXPECT_EQ(j_of(t, 2), (std::vector<std::int64_t>{-4, -2, 2, 4}));
  EXPECT_EQ(j_of(t, 3), (std::vector<std::int64_t>{-13, -11, -7, -5, 5, 7, 11, 13}));
}

TEST(JSets, MixedAndIrregularMatchOracle) {
  auto mixed = build_tower(line_config({2, 3, 2, 3, 2}));
  EXPECT_EQ(j_of(*mixed, 1), (std::vector<std::int64_t>{1}));
  EXPECT_EQ(j_of(*mixed, 2), (std::vector<std::int64_t>{3, 5}));
  EXPECT_EQ(j_of(*mixed, 3), (std::vector<std::int64_t>{9, 11}));
  auto irr = build_tower(line_config({15, 31, 3}));
  EXPECT_EQ(j_of(*irr, 1).size(), 14u);
  EXPECT_EQ(j_set(*irr, 2).elements.size(), 420u);
  EXPECT_EQ(j_of(*irr, 2).front(), 16);
  EXPECT_EQ(j_of(*irr, 2)[14], 31);  // multiples of 15 lie in J(0)Gamma_1
}

TEST(JSets, RecursionAgreesWithDefinition) {
  for (const auto& cfg : {line_config({3, 3, 3, 3, 3, 3, 3}), line_config({2, 3, 2, 3, 2}),
                          line_config({5, 3, 3, 5}, DomainStyle::Centered), lattice_config({{3, 1}, {1, 3}, {3, 3}})}) {
    auto t = build_tower(cfg);
    for (std::size_t n = 1; n < t->depth(); ++n) {
      const JSet a = j_set(*t, n);
      EXPECT_EQ(a.elements, j_set_recursive(*t, n).elements) << "n=" << n;
      EXPECT_EQ(BigInt(static_cast<unsigned long>(a.elements.size())), j_size(*t, n));
    }
  }
}

TEST(JSets, OneStepOfRecursion) {
  auto t = build_tower(line_config({3, 3, 3, 3}));
  EXPECT_EQ(j_recursion_step(*t, j_set(*t, 2)).elements, j_set(*t, 3).elements);
}

TEST(Skeleton, ThreeadicRecordsAndWindows) {
  auto s = preset_skeleton("threeadic", 4);
  ASSERT_EQ(s->h_records().size(), 2u);
  EXPECT_EQ(s->h_records()[0].step, 3u);
  EXPECT_EQ(s->h_records()[0].h, Element({4}));
  EXPECT_EQ(s->h_records()[1].step, 4u);
  EXPECT_EQ(s->h_records()[1].h, Element({14}));
  EXPECT_EQ(window_values(*s, 2), (std::vector<int>{1, 0, 0, 1, 1, 0, 1, 0, 0}));
  auto s5 = preset_skeleton("threeadic", 5);
  EXPECT_EQ(window_values(*s5, 3), (std::vector<int>{1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 0, 0, 1, 0, 1,
                                                     1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0}));
  EXPECT_EQ(s->eval(Element({14})), 1);
}

TEST(Skeleton, CenteredRecordsAndWindows) {
  auto s = preset_skeleton("threeadic-centered", 5);
  ASSERT_GE(s->h_records().size(), 2u);
  EXPECT_EQ(s->h_records()[0].h, Element({-4}));
  EXPECT_EQ(s->h_records()[1].h, Element({-11}));
  EXPECT_EQ(window_values(*s, 1), (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(window_values(*s, 2), (std::vector<int>{1, 1, 0, 0, 1, 0, 0, 1, 0}));
}

TEST(Skeleton, MixedAndIrregularWindows) {
  auto mixed = line_skeleton({2, 3, 2, 3, 2}, 4);
  ASSERT_EQ(mixed->h_records().size(), 1u);
  EXPECT_EQ(mixed->h_records()[0].h, Element({3}));
  EXPECT_EQ(window_values(*mixed, 2), (std::vector<int>{1, 0, 1, 1, 1, 0}));
  auto irr = line_skeleton({15, 31, 3}, 2);
  EXPECT_TRUE(irr->h_records().empty());
  std::vector<int> w1(15, 0);
  w1[0] = 1;
  EXPECT_EQ(window_values(*irr, 1), w1);
}

TEST(Skeleton, BlockBoundaries) {
  auto s = preset_skeleton("threeadic", 5);
  // m(k) = |J(k)| = 2^k for k >= 1; m_k = 1 + k + sum m(i)
  EXPECT_EQ(s->m_k()[0], 2);
  EXPECT_EQ(s->m_k()[1], 5);
  EXPECT_EQ(s->m_k()[2], 10);
  EXPECT_EQ(s->subsequence(), (std::vector<std::size_t>{1, 4}));
  EXPECT_TRUE(s->in_subsequence(4));
  EXPECT_FALSE(s->in_subsequence(3));
}

TEST(Skeleton, DepthLimits) {
  auto t = build_tower(line_config({3, 3, 3}));
  EXPECT_THROW(build_skeleton(t, 3), DepthExceeded);
  auto s = build_skeleton(t, 2);
  EXPECT_FALSE(s->eval(Element({4})).has_value());  // 4 lies in J(2), assigned at step 3
  EXPECT_EQ(s->eval(Element({0})), 1);
}

TEST(Skeleton, JsonRoundTrip) {
  auto s = preset_skeleton("threeadic", 5);
  auto back = load_skeleton(s->to_json());
  EXPECT_EQ(back->depth(), s->depth());
  EXPECT_EQ(window_values(*back, 4), window_values(*s, 4));
}

TEST(SkeletonProperty, ValueIsPeriodicAtItsLevel) {
  for (const std::string name : {"threeadic", "threeadic-centered"}) {
    auto s = preset_skeleton(name, 6);
    const QuotientTower& t = s->tower();
    ElementGen gen(t, 303);
    for (int i = 0; i < 4000; ++i) {
      const Element g = gen.any(200000);
      const auto lvl = s->level_of(g);
      ASSERT_EQ(lvl, covering_level(t, g, s->depth()));
      if (!lvl) continue;
      const Element shift = Element::scalar(BigInt(gen.any(1000)[0] * t.domain_size(*lvl + 1)));
      ASSERT_EQ(s->eval(g), s->eval(t.mul(g, shift))) << g.to_string();
    }
  }
}

TEST(SkeletonProperty, FastPathAgreesWithGeneric) {
  auto s = preset_skeleton("irregular-demo", 3);
  ASSERT_TRUE(s->fast_ok());
  ElementGen gen(s->tower(), 404);
  for (int i = 0; i < 5000; ++i) {
    const Element g = gen.any(1'000'000'000);
    const std::int64_t c = g[0].get_si();
    const auto lvl = s->level_of(g);
    ASSERT_EQ(s->level_of_fast(&c), lvl ? static_cast<int>(*lvl) : -1);
    const auto v = s->eval(g);
    ASSERT_EQ(s->eval_fast(&c), v ? *v : -1);
  }
}
