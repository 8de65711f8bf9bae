#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "toeplitz/budget.hpp"
#include "toeplitz/check.hpp"
#include "toeplitz/skeleton.hpp"

namespace toeplitz {

// Subset of G/Gamma_n stored as sorted enumeration indices of representatives in D_n.
struct CosetSet {
  std::size_t level = 0;
  std::vector<std::uint64_t> members;

  bool contains(std::uint64_t idx) const;
  std::size_t size() const { return members.size(); }
  friend bool operator==(const CosetSet& a, const CosetSet& b) {
    return a.level == b.level && a.members == b.members;
  }
};

CosetSet coset_union(const CosetSet& a, const CosetSet& b);
CosetSet coset_intersection(const CosetSet& a, const CosetSet& b);
CosetSet coset_difference(const CosetSet& a, const CosetSet& b);
// {g*c : c in s} reduced mod Gamma_n.
CosetSet coset_translate(const QuotientTower& t, const CosetSet& s, const Element& g);
// All cosets of Gamma_m (m >= level) contained in the union of s.
CosetSet coset_lift(const QuotientTower& t, const CosetSet& s, std::size_t m, const Budget& budget = {});
bool coset_contains(const QuotientTower& t, const CosetSet& s, const Element& g);
std::vector<Element> coset_elements(const QuotientTower& t, const CosetSet& s);
// Whole G/Gamma_n.
CosetSet coset_all(const QuotientTower& t, std::size_t n, const Budget& budget = {});

// A {0,1}-array on G whose period sets can be computed exactly at quotient level.
class SymbolArray {
 public:
  virtual ~SymbolArray() = default;
  virtual const QuotientTower& tower() const = 0;
  // nullopt when the value is not determined by the available data.
  virtual std::optional<int> value(const Element& g) const = 0;
  // Per(x, Gamma_n, alpha) as a coset set.
  virtual CosetSet per_set(std::size_t n, int alpha, const Budget& budget = {}) const = 0;
  // Highest level at which values on D_level are all known.
  virtual std::size_t evaluation_level() const = 0;
  virtual std::string describe() const = 0;
};

using ArrayPtr = std::shared_ptr<const SymbolArray>;

// The constructed array eta.
class ToeplitzArray : public SymbolArray {
 public:
  explicit ToeplitzArray(SkeletonPtr skel) : skel_(std::move(skel)) {}
  const QuotientTower& tower() const override { return skel_->tower(); }
  std::optional<int> value(const Element& g) const override { return skel_->eval(g); }
  CosetSet per_set(std::size_t n, int alpha, const Budget& budget = {}) const override;
  std::size_t evaluation_level() const override { return skel_->depth() == 0 ? 0 : skel_->depth() - 1; }
  std::string describe() const override { return "eta"; }
  const ToeplitzSkeleton& skeleton() const { return *skel_; }

 private:
  SkeletonPtr skel_;
};

// eta_n: the Gamma_n-periodization of eta restricted to D_n.
class PeriodizedArray : public SymbolArray {
 public:
  PeriodizedArray(SkeletonPtr skel, std::size_t n, const Budget& budget = {});
  const QuotientTower& tower() const override { return skel_->tower(); }
  std::optional<int> value(const Element& g) const override;
  CosetSet per_set(std::size_t m, int alpha, const Budget& budget = {}) const override;
  std::size_t evaluation_level() const override { return level_; }
  std::string describe() const override { return "eta_" + std::to_string(level_); }
  const SymbolWindow& window() const { return window_; }

 private:
  SkeletonPtr skel_;
  std::size_t level_;
  SymbolWindow window_;
};

class ConstantArray : public SymbolArray {
 public:
  ConstantArray(TowerPtr tower, int symbol) : tower_(std::move(tower)), symbol_(symbol) {}
  const QuotientTower& tower() const override { return *tower_; }
  std::optional<int> value(const Element&) const override { return symbol_; }
  CosetSet per_set(std::size_t n, int alpha, const Budget& budget = {}) const override;
  std::size_t evaluation_level() const override { return tower_->depth(); }
  std::string describe() const override { return "constant " + std::to_string(symbol_); }

 private:
  TowerPtr tower_;
  int symbol_;
};

// base with the symbol at one group element flipped.
class PointFlipArray : public SymbolArray {
 public:
  PointFlipArray(ArrayPtr base, Element flip) : base_(std::move(base)), flip_(std::move(flip)) {}
  const QuotientTower& tower() const override { return base_->tower(); }
  std::optional<int> value(const Element& g) const override;
  CosetSet per_set(std::size_t n, int alpha, const Budget& budget = {}) const override;
  std::size_t evaluation_level() const override { return base_->evaluation_level(); }
  std::string describe() const override { return base_->describe() + " with " + flip_.to_string() + " flipped"; }

 private:
  ArrayPtr base_;
  Element flip_;
};

// Per(eta, Gamma_n, alpha) for the constructed array.
CosetSet per_set(const ToeplitzSkeleton& skel, std::size_t n, int alpha, const Budget& budget = {});

// Per(x,Gamma_n) = union_{i<n} J(i)Gamma_{i+1}; J(i) inside Per(Gamma_{i+1}) \ Per(Gamma_i);
// every periodic coset is constant on its lifts through D_{evaluation level}.
CheckResult per_eq_check(const SymbolArray& x, std::size_t n, const Budget& budget = {});
// Gamma_n is an essential group of periods of x (abelian towers only).
CheckResult essential_check(const SymbolArray& x, std::size_t n, const Budget& budget = {});
// Per(eta, Gamma_s, 1) equals Gamma_1 together with the planted cosets h*Gamma_step, step <= s;
// at a block end n_k also Per(eta, Gamma_{n_k}, 1) = Per(eta, Gamma_{n_k+1}, 1).
CheckResult per1_structure_check(const ToeplitzSkeleton& skel, std::size_t s, const Budget& budget = {});

struct CoverResult {
  CheckResult check;
  std::optional<std::size_t> level;  // minimal l with gamma J(i) inside J(l)Gamma_{l+1}
};
// gamma must lie in Gamma_i.
CoverResult auxiliar_cover_check(const ToeplitzSkeleton& skel, std::size_t i, const Element& gamma,
                                 const Budget& budget = {});

struct PartitionsCStats {
  std::uint64_t translates = 0;     // gammas examined
  std::uint64_t undetermined = 0;   // gammas with an undefined value among gamma*J(k)
  std::uint64_t violations = 0;     // gammas with two or more ones
  std::optional<std::string> first_violation;
};
// Number of ones among eta(gamma*g), g in J(k), must be at most one.
void partitions_c_visit(const ToeplitzSkeleton& skel, std::size_t k, const JSet& jk, const Element& gamma,
                        PartitionsCStats& stats);
// Exhaustive over gamma in Gamma_k cap D_{k+window}, plus `samples` seeded random gammas in Gamma_k cap D_{sample_level}.
CheckResult partitions_c_check(const ToeplitzSkeleton& skel, std::size_t k, std::size_t window, std::uint64_t samples,
                               std::size_t sample_level, std::uint64_t seed, const Budget& budget = {});

}  // namespace toeplitz
