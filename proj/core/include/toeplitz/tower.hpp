#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toeplitz/budget.hpp"
#include "toeplitz/check.hpp"
#include "toeplitz/element.hpp"
#include "toeplitz/rational.hpp"

namespace toeplitz {

enum class TowerKind { IntegerLine, IntegerLattice, Generic };
enum class DomainStyle { NonNegative, Centered };

// What the tower promises about levels beyond the configured ones.
struct TailSpec {
  enum class Kind {
    None,       // nothing declared
    Repeat,     // the configured indices repeat forever (L diverges)
    Geometric,  // each further term |D_j|/|D_{j+1}| is at most `ratio` times the previous one
  };
  Kind kind = Kind::None;
  Rational ratio;
};

// Explicit finite group with a chain of normal subgroups given by coset labels.
struct GroupTable {
  struct Level {
    std::vector<int> coset;   // coset label of every element modulo Gamma_n
    std::vector<int> domain;  // D_n in enumeration order
  };
  std::vector<std::vector<int>> mul;  // mul[a][b] = a*b
  std::vector<Level> levels;          // levels[n-1] describes Gamma_n and D_n
};

struct TowerConfig {
  TowerKind kind = TowerKind::IntegerLine;
  std::size_t dim = 1;
  std::vector<std::vector<std::int64_t>> indices;  // indices[n-1][axis] = [Gamma_{n-1}:Gamma_n] per axis
  DomainStyle style = DomainStyle::NonNegative;
  TailSpec tail;
  std::optional<GroupTable> table;
  std::string name;
};

TowerConfig line_config(const std::vector<std::int64_t>& indices, DomainStyle style = DomainStyle::NonNegative);
TowerConfig lattice_config(const std::vector<std::vector<std::int64_t>>& indices,
                           DomainStyle style = DomainStyle::NonNegative);
// Z/N as an explicit table with Gamma_n = (N_n) and interval domains; handy for cross-checks.
TowerConfig cyclic_table_config(const std::vector<std::int64_t>& indices);

TowerConfig parse_tower_config(const nlohmann::json& j);
TowerConfig load_tower_config(const std::filesystem::path& path);
nlohmann::json to_json(const TowerConfig& c);

class QuotientTower {
 public:
  explicit QuotientTower(TowerConfig config);

  const TowerConfig& config() const { return config_; }
  TowerKind kind() const { return config_.kind; }
  bool is_box() const { return config_.kind != TowerKind::Generic; }
  std::size_t dim() const { return config_.dim; }
  DomainStyle style() const { return config_.style; }
  std::size_t depth() const { return depth_; }
  bool abelian() const { return abelian_; }

  // |D_n| = [G : Gamma_n]
  const BigInt& domain_size(std::size_t n) const;
  // [Gamma_{n-1} : Gamma_n] for n >= 1
  const BigInt& level_index(std::size_t n) const;
  // Box towers: N_n on the given axis.
  const BigInt& axis_modulus(std::size_t n, std::size_t axis) const;

  Element identity() const;
  Element mul(const Element& a, const Element& b) const;
  Element inv(const Element& a) const;
  bool is_identity(const Element& g) const;

  // Representative of g*Gamma_n in D_n.
  Element reduce(const Element& g, std::size_t n) const;
  bool in_domain(const Element& g, std::size_t n) const;
  bool in_subgroup(const Element& g, std::size_t n) const;
  // g = v*u with v in D_j cap Gamma_i and u in D_i.
  std::pair<Element, Element> tile_decompose(const Element& g, std::size_t j, std::size_t i) const;

  // Enumeration of D_n: ascending per axis, axis 0 fastest; table towers use the listed order.
  std::uint64_t enumerable_size(std::size_t n) const;
  Element element_at(std::size_t n, std::uint64_t idx) const;
  std::uint64_t index_of(const Element& d, std::size_t n) const;
  // D_j cap Gamma_i in enumeration order.
  std::vector<Element> subgroup_domain(std::size_t i, std::size_t j) const;

  // 64-bit path for box towers. Valid for levels whose moduli stay below 2^60.
  bool fast_ok(std::size_t n) const;
  std::int64_t fast_modulus(std::size_t n, std::size_t axis) const { return fast_mod_[n][axis]; }
  std::int64_t fast_low(std::size_t n, std::size_t axis) const {
    return config_.style == DomainStyle::Centered ? -(fast_mod_[n][axis] - 1) / 2 : 0;
  }
  std::int64_t fast_reduce(std::int64_t c, std::size_t n, std::size_t axis) const {
    const std::int64_t m = fast_mod_[n][axis];
    std::int64_t r = c % m;
    if (r < 0) r += m;
    if (config_.style == DomainStyle::Centered && r > (m - 1) / 2) r -= m;
    return r;
  }
  bool fast_in_domain(std::int64_t c, std::size_t n, std::size_t axis) const {
    const std::int64_t m = fast_mod_[n][axis];
    if (config_.style == DomainStyle::Centered) return c >= -(m - 1) / 2 && c <= (m - 1) / 2;
    return c >= 0 && c < m;
  }

  const GroupTable* table() const { return config_.table ? &*config_.table : nullptr; }

  void check_element(const Element& g) const;
  void check_level(std::size_t n) const;

 private:
  void init_box();
  void init_table();
  BigInt axis_low(std::size_t n, std::size_t axis) const;
  int table_coset(int g, std::size_t n) const;

  TowerConfig config_;
  std::size_t depth_ = 0;
  bool abelian_ = true;
  std::vector<BigInt> size_;                      // |D_n|
  std::vector<BigInt> index_;                     // [Gamma_{n-1}:Gamma_n]
  std::vector<std::vector<BigInt>> mod_;          // box: N_n per axis
  std::vector<std::vector<std::int64_t>> fast_mod_;
  std::size_t fast_depth_ = 0;                    // levels 0..fast_depth_-1 usable on the 64-bit path
  // table data, level 0 included
  int identity_ = 0;
  std::vector<int> inverse_;
  std::vector<std::vector<int>> coset_;           // coset_[n][g]
  std::vector<std::vector<int>> rep_;             // rep_[n][coset] in D_n or -1
  std::vector<std::vector<int>> domain_;          // domain_[n]
  std::vector<std::vector<int>> position_;        // position_[n][g] in D_n or -1
};

using TowerPtr = std::shared_ptr<const QuotientTower>;

// Throws InvalidIndex, ParityError or ConfigError on malformed configs.
TowerPtr build_tower(const TowerConfig& config);

// Checks nestedness, identity membership, transversality and the tiling
// bijection by enumeration for levels <= max_level (interval inclusion beyond
// the enumeration budget for box towers). Never throws on a failed property.
CheckResult validate_tower(const QuotientTower& tower, std::size_t max_level, const Budget& budget = {});

}  // namespace toeplitz
