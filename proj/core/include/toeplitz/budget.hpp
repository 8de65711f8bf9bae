#pragma once

#include <cstdint>

namespace toeplitz {

// Caps on exhaustive work. Exceeding a cap raises BudgetExceeded instead of
// silently sampling.
struct Budget {
  std::uint64_t enumeration = std::uint64_t{1} << 23;  // elements visited in one pass
  std::uint64_t window_bits = 1'000'000'000;           // bits in one materialized window
  std::uint64_t cells = std::uint64_t{1} << 22;        // partition atoms in one cell set

  // Overrides from TOEPLITZ_ENUM_BUDGET, TOEPLITZ_WINDOW_BITS, TOEPLITZ_CELL_BUDGET.
  static Budget from_env();
  static Budget from_env(Budget base);
};

}  // namespace toeplitz
