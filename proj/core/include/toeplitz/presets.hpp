#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "toeplitz/tower.hpp"

namespace toeplitz {

// "threeadic": index 3 at twelve levels, D_n = {0..3^n-1}, indices repeat.
// "threeadic-centered": the same group with balanced domains.
// "irregular-demo": indices 15, 31, 63, 127, 255, 511 with centered domains and a
// geometric tail of ratio 1/2, which keeps 1 - exp(-2L) below 1/4.
std::vector<std::string> preset_names();
TowerConfig preset_config(const std::string& name);  // throws ConfigError for unknown names
std::size_t preset_default_depth(const std::string& name);

}  // namespace toeplitz
