#include <gtest/gtest.h>

#include <random>

#include "toeplitz/element.hpp"
#include "toeplitz/errors.hpp"
#include "toeplitz/rational.hpp"

using namespace toeplitz;

TEST(Rational, FractionAndDecimalRendering) {
  EXPECT_EQ(to_fraction_string(make_rational(10, 30)), "1/3");
  EXPECT_EQ(to_fraction_string(make_rational(6, 3)), "2");
  EXPECT_EQ(to_decimal_string(make_rational(1, 3), 5), "0.33333");
  EXPECT_EQ(to_decimal_string(make_rational(-1, 8), 4), "-0.1250");
  EXPECT_EQ(to_decimal_string(make_rational(7, 2), 0), "3");
}

TEST(Rational, JsonCarriesBothForms) {
  const auto j = rational_json(make_rational(211, 243));
  EXPECT_EQ(j["fraction"], "211/243");
  EXPECT_EQ(j["num"], "211");
  EXPECT_EQ(j["den"], "243");
  EXPECT_EQ(j["decimal"].get<std::string>().substr(0, 6), "0.8683");
}

TEST(Rational, ParseRejectsGarbage) {
  EXPECT_EQ(parse_rational("4/6"), make_rational(2, 3));
  EXPECT_THROW(parse_rational("1/0"), ConfigError);
  EXPECT_THROW(parse_rational("x"), ConfigError);
  EXPECT_THROW(make_rational(1, 0), Error);
}

TEST(Rational, Int64Conversions) {
  EXPECT_EQ(to_int64(from_int64(INT64_MIN)), INT64_MIN);
  EXPECT_EQ(to_uint64(from_uint64(UINT64_MAX)), UINT64_MAX);
  EXPECT_FALSE(fits_int64(BigInt("9223372036854775808")));
  EXPECT_THROW(to_uint64(BigInt(-1)), BudgetExceeded);
}

TEST(Rational, Int64RoundTripProperty) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const auto v = static_cast<std::int64_t>(rng());
    EXPECT_EQ(to_int64(from_int64(v)), v);
  }
}

TEST(Element, ParsesAllSpellings) {
  EXPECT_EQ(parse_element("14"), Element({14}));
  EXPECT_EQ(parse_element("-3"), Element({-3}));
  EXPECT_EQ(parse_element("3,4"), Element({3, 4}));
  EXPECT_EQ(parse_element("(3,-4)"), Element({3, -4}));
  EXPECT_EQ(parse_element("[3, 4]"), Element({3, 4}));
  EXPECT_THROW(parse_element(""), ConfigError);
  EXPECT_THROW(parse_element("3,,4"), ConfigError);
  EXPECT_THROW(parse_element("a"), ConfigError);
}

TEST(Element, ToStringRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> pick(-1000, 1000);
  for (int i = 0; i < 500; ++i) {
    const Element one({pick(rng)});
    const Element two({pick(rng), pick(rng)});
    EXPECT_EQ(parse_element(one.to_string()), one);
    EXPECT_EQ(parse_element(two.to_string()), two);
  }
  EXPECT_EQ(Element({3, -4}).to_string(), "(3,-4)");
}
