#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "toeplitz/budget.hpp"
#include "toeplitz/check.hpp"
#include "toeplitz/periods.hpp"
#include "toeplitz/skeleton.hpp"

namespace toeplitz {

// Named clopen sets of the orbit closure at level n.
enum class SetKind { Cn, Cn0, Cn1, Cng, Zn, Wn, Un, Yn, Cyl0, Cyl1 };

struct SetId {
  SetKind kind = SetKind::Cn;
  std::optional<Element> g;  // for Cng
};

// "Cn", "Cn0", "Cn1", "Cng:<g>", "Zn", "Wn", "Un", "Yn", "[0]", "[1]".
SetId parse_set_id(const std::string& text);
std::string set_id_name(const SetId& id);

// Partition atom sigma^{v^-1} C_n^0 (tag 0) or sigma^{v^-1} C_{n,g} (tag 1 + position of g in J(n)).
struct Atom {
  std::uint64_t v = 0;  // enumeration index in D_n
  std::uint32_t tag = 0;
  friend bool operator==(const Atom& a, const Atom& b) { return a.v == b.v && a.tag == b.tag; }
};

struct CellSet {
  std::size_t level = 0;
  std::vector<bool> atoms;  // indexed by v * (1 + |J(n)|) + tag

  std::uint64_t count() const;
  bool contains(std::uint64_t code) const { return atoms[code]; }
};

CellSet cell_union(const CellSet& a, const CellSet& b);
bool cell_subset(const CellSet& a, const CellSet& b);
bool operator==(const CellSet& a, const CellSet& b);

class CellAlgebra {
 public:
  CellAlgebra(SkeletonPtr skel, Budget budget = {});

  const ToeplitzSkeleton& skeleton() const { return *skel_; }
  const QuotientTower& tower() const { return skel_->tower(); }

  const JSet& j(std::size_t n) const;
  std::uint64_t tags(std::size_t n) const { return 1 + j(n).elements.size(); }
  std::uint64_t atom_count(std::size_t n) const;
  std::uint64_t code(std::size_t n, const Atom& a) const { return a.v * tags(n) + a.tag; }
  Atom atom(std::size_t n, std::uint64_t code) const { return Atom{code / tags(n), static_cast<std::uint32_t>(code % tags(n))}; }
  std::string atom_name(std::size_t n, const Atom& a) const;

  // Position of g in J(n), if any.
  std::optional<std::uint32_t> j_position(std::size_t n, const Element& g) const;

  // Level-n atom containing a level-(n+1) atom (refinement rules of the partition chain).
  Atom parent(std::size_t n_plus_1, const Atom& a) const;
  CellSet empty(std::size_t n) const;
  // Descendants at level m of a level-n cell set.
  CellSet expand(const CellSet& s, std::size_t m) const;

  // Cn, Cn0, Cn1, Cng, Zn, Wn, [0], [1] as unions of level-n atoms. Un/Yn throw Unsupported.
  CellSet decompose(const SetId& id, std::size_t n) const;
  // union over v in D_n of sigma^{v^-1} C_{n+1}^1, at level n+1
  CellSet shifted_ones(std::size_t n) const;

  // Atom containing sigma^{v^-1} eta at level n; nullopt when a needed value lies beyond the depth.
  std::optional<Atom> orbit_label(const Element& v, std::size_t n) const;

 private:
  void require_level(std::size_t n) const;
  const std::vector<std::uint64_t>& parent_table(std::size_t n_plus_1) const;

  SkeletonPtr skel_;
  Budget budget_;
  mutable std::map<std::size_t, JSet> j_;
  mutable std::map<std::size_t, std::unordered_map<Element, std::uint32_t, ElementHash>> jpos_;
  mutable std::map<std::size_t, std::vector<std::uint64_t>> parents_;
  mutable std::map<std::size_t, std::pair<CosetSet, CosetSet>> per_;
};

// Refinement inclusions (1)-(5) as exact atom relations for 1 <= n < max_level, cross-checked
// against orbit labels of sigma^{v^-1} eta for v in D_{label_level}.
CheckResult containings_check(const CellAlgebra& cells, std::size_t max_level, std::size_t label_level);
// Z_n = Z_{n+1} u W_{n+1} u (shifted C^1_{n+1}) for n in M, Z_n inside Z_{n+1} u W_{n+1} otherwise,
// and the chained inclusion between pairs of subsequence levels.
CheckResult z_identity_check(const CellAlgebra& cells, std::size_t max_level);
// The cylinders [0], [1] as level-n cell unions: partition, refinement consistency,
// orbit labels, and the coefficient matrix A_n.
CheckResult at_least_check(const CellAlgebra& cells, std::size_t max_level, std::size_t label_level);

}  // namespace toeplitz
