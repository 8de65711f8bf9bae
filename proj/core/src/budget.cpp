#include "toeplitz/budget.hpp"

#include <cstdlib>
#include <string>

#include "toeplitz/errors.hpp"

namespace toeplitz {

namespace {

void override_from(const char* var, std::uint64_t& slot) {
  const char* raw = std::getenv(var);
  if (!raw || !*raw) return;
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(raw, &used, 10);
    if (used != std::string(raw).size() || v == 0) throw std::invalid_argument(raw);
    slot = v;
  } catch (const std::exception&) {
    throw ConfigError(std::string(var) + " must be a positive integer, got '" + raw + "'");
  }
}

}  // namespace

Budget Budget::from_env(Budget base) {
  override_from("TOEPLITZ_ENUM_BUDGET", base.enumeration);
  override_from("TOEPLITZ_WINDOW_BITS", base.window_bits);
  override_from("TOEPLITZ_CELL_BUDGET", base.cells);
  return base;
}

Budget Budget::from_env() { return from_env(Budget{}); }

}  // namespace toeplitz
