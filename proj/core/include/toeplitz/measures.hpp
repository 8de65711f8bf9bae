#pragma once

#include <cstddef>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "toeplitz/budget.hpp"
#include "toeplitz/cells.hpp"
#include "toeplitz/check.hpp"
#include "toeplitz/density.hpp"
#include "toeplitz/periods.hpp"
#include "toeplitz/skeleton.hpp"

namespace toeplitz {

// n_k = m_k - 1; throws DepthExceeded when block k is not completed by the skeleton.
std::size_t subsequence_M(const ToeplitzSkeleton& skel, std::size_t k);
// n_k for every block boundary the tower itself determines (m_k <= tower depth).
std::vector<std::size_t> subsequence_within_tower(const ToeplitzSkeleton& skel);

struct Pattern {
  std::vector<Element> support;
  std::vector<int> values;
};

// {"support": ["0", "1"], "values": [1, 0]}
Pattern parse_pattern(const nlohmann::json& j);

// mu_n: uniform average of the point masses at sigma^{d^-1} eta_n, d in D_n.
class PeriodicMeasure {
 public:
  // Needs a fully defined window, i.e. n < skeleton depth.
  PeriodicMeasure(SkeletonPtr skel, std::size_t n, const Budget& budget = {});

  std::size_t level() const { return level_; }
  const SymbolWindow& window() const { return window_; }
  const QuotientTower& tower() const { return skel_->tower(); }
  // eta_n(g)
  int value(const Element& g) const;

 private:
  SkeletonPtr skel_;
  std::size_t level_;
  SymbolWindow window_;
};

// |{d in D_n : eta_n(d*s) = p(s) for all s}| / |D_n|
Rational mu_cylinder(const PeriodicMeasure& mu, const Pattern& p, const Budget& budget = {});

struct ACounts {
  BigInt a0;      // |D_n cap Per(eta, Gamma_n, 0)|
  BigInt a1;      // |D_n cap Per(eta, Gamma_n, 1)|
  BigInt j_size;  // |J(n)|
  BigInt domain;  // |D_n|
};

// Recursion a_{n,1} = a_{n-1,1} q_n + [step n plants], a_{n,0} = a_{n-1,0} q_n + |J(n-1)| - [step n plants].
ACounts a_counts(const ToeplitzSkeleton& skel, std::size_t n);
// Direct count from the period sets; nullopt beyond the enumeration budget.
std::optional<ACounts> a_counts_enumerated(const ToeplitzSkeleton& skel, std::size_t n, const Budget& budget = {});

struct Limit01 {
  std::size_t level = 0;
  Interval zero;  // mu([0])
  Interval one;   // mu([1])
};

// Throws InconclusiveTail when the density verdict is inconclusive.
Limit01 limit_01(const ToeplitzSkeleton& skel, const DensityReport& density);

CheckResult an_det_from_counts(std::size_t n, const ACounts& c);
CheckResult an_det_check(const ToeplitzSkeleton& skel, std::size_t n);

// Membership of orbit points sigma^{v^-1} eta in the named sets, decided from values of eta.
class OrbitOracle {
 public:
  OrbitOracle(SkeletonPtr skel, Budget budget = {});

  const ToeplitzSkeleton& skeleton() const { return *skel_; }
  // nullopt when a value needed for the decision lies beyond the constructed depth.
  std::optional<bool> member(const Element& v, const SetId& id, std::size_t n) const;

  std::optional<bool> in_Cn(const Element& v, std::size_t n) const;
  std::optional<bool> in_Cn0(const Element& v, std::size_t n) const;
  std::optional<bool> in_Cng(const Element& v, std::size_t n, const Element& g) const;
  std::optional<bool> in_Cn1(const Element& v, std::size_t n) const;
  std::optional<bool> in_Zn(const Element& v, std::size_t n) const;
  std::optional<bool> in_Wn(const Element& v, std::size_t n) const;
  std::optional<bool> in_Un(const Element& v, std::size_t n) const;
  std::optional<bool> in_Yn(const Element& v, std::size_t n) const;

 private:
  const std::pair<CosetSet, CosetSet>& per(std::size_t n) const;
  const JSet& j(std::size_t n) const;

  SkeletonPtr skel_;
  Budget budget_;
  mutable std::map<std::size_t, std::pair<CosetSet, CosetSet>> per_;
  mutable std::map<std::size_t, JSet> j_;
  mutable std::map<std::size_t, std::vector<int>> eta_n_;
};

// Throws DepthExceeded when membership is not determined at the constructed depth.
bool orbit_member(const OrbitOracle& oracle, const Element& v, const SetId& id, std::size_t n);

// mu_m(U_n) exactly: fraction of d in D_m with eta_m(d*w) = eta_n(w) for all w in D_{n+1}.
Rational mu_U(const PeriodicMeasure& mu_m, const ToeplitzSkeleton& skel, std::size_t n, const Budget& budget = {});

// (1/|D_{n+1}|) prod_{l=1}^{m-n-1} (1 - |D_{n+l}|/|D_{n+l+1}|)
Rational uns_lower_bound(const QuotientTower& tower, std::size_t n, std::size_t m);

// Certified lower bound on lim_s prod_{l=1}^{s} (1 - |D_{n+l}|/|D_{n+l+1}|) from configured
// levels and the declared geometric tail; nullopt when no tail is declared or it diverges.
std::optional<Rational> z_measure_lower_bound(const QuotientTower& tower, std::size_t n);

}  // namespace toeplitz
