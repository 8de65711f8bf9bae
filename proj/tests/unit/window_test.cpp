#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "test_support.hpp"
#include "toeplitz/errors.hpp"
#include "toeplitz/skeleton.hpp"

using namespace toeplitz;
using namespace toeplitz::fixtures;

TEST(Window, MaterializeMatchesEval) {
  auto s = preset_skeleton("threeadic", 5);
  const SymbolWindow w = materialize_window(*s, 4);
  ASSERT_EQ(w.length(), 81u);
  EXPECT_TRUE(w.complete());
  for (std::uint64_t i = 0; i < w.length(); ++i) EXPECT_EQ(w.get(i), *s->eval(s->tower().element_at(4, i)));
  EXPECT_EQ(w.count_ones(), 31u);  // step 5 closes block 1 and fills J(4) with zeros
}

TEST(Window, UndefinedCellsAreMasked) {
  auto s = preset_skeleton("threeadic", 4);
  const SymbolWindow w = materialize_window(*s, 4);
  EXPECT_FALSE(w.complete());
  EXPECT_EQ(w.undefined_count(), 16u);  // J(4) is assigned at step 5
}

TEST(Window, BitsRoundTrip) {
  auto s = preset_skeleton("threeadic-centered", 5);
  for (std::size_t n : {1u, 3u, 5u}) {
    const SymbolWindow w = materialize_window(*s, n);
    std::stringstream ss;
    write_window_bits(ss, w);
    EXPECT_EQ(read_window_bits(ss), w) << "n=" << n;
  }
}

TEST(Window, CsvRoundTrip) {
  auto s = preset_skeleton("threeadic", 5);
  const SymbolWindow w = materialize_window(*s, 5);
  std::stringstream ss;
  write_window_csv(ss, w, s->tower());
  EXPECT_EQ(read_window_csv(ss, s->tower(), 5), w);
}

TEST(Window, CsvRejectsForeignRows) {
  auto s = preset_skeleton("threeadic", 4);
  std::stringstream ss("x0,symbol\n0,1\n99,0\n");
  EXPECT_ANY_THROW(read_window_csv(ss, s->tower(), 2));
}

TEST(Window, PgmHeader) {
  auto s = preset_skeleton("threeadic", 5);
  std::stringstream ss;
  write_window_pgm(ss, materialize_window(*s, 4), s->tower());
  std::string magic;
  int width = 0, height = 0, maxval = 0;
  ss >> magic >> width >> height >> maxval;
  EXPECT_EQ(magic, "P5");
  EXPECT_EQ(width * height, 81);
  EXPECT_EQ(maxval, 255);
}

TEST(Window, BudgetIsEnforced) {
  auto s = preset_skeleton("threeadic", 5);
  Budget tight;
  tight.window_bits = 100;
  EXPECT_THROW(materialize_window(*s, 5, tight), BudgetExceeded);
}

TEST(WindowProperty, RandomWindowsRoundTrip) {
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint64_t len = 1 + rng() % 700;
    SymbolWindow w(3, len);
    for (std::uint64_t i = 0; i < len; ++i) {
      const auto r = rng() % 3;
      if (r < 2) w.set(i, static_cast<int>(r));
    }
    std::stringstream ss;
    write_window_bits(ss, w);
    const SymbolWindow back = read_window_bits(ss);
    ASSERT_EQ(back, w);
    ASSERT_EQ(back.undefined_count(), w.undefined_count());
  }
}
