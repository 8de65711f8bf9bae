#pragma once

#include <cstddef>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "toeplitz/budget.hpp"
#include "toeplitz/rational.hpp"
#include "toeplitz/skeleton.hpp"

namespace toeplitz {

struct Interval {
  Rational lo;
  Rational hi;
  Rational width() const { return hi - lo; }
  bool contains(const Rational& q) const { return lo <= q && q <= hi; }
};

nlohmann::json interval_json(const Interval& i);

// d_n = |D_n cap Per(eta, Gamma_n)| / |D_n| three ways.
std::optional<Rational> d_by_enumeration(const ToeplitzSkeleton& skel, std::size_t n, const Budget& budget = {});
Rational d_by_recursion(const QuotientTower& tower, std::size_t n);
Rational d_closed_form(const QuotientTower& tower, std::size_t n);

struct DensityMethods {
  std::optional<Rational> enumeration;
  Rational recursion;
  Rational closed_form;
  bool agree = true;
};
DensityMethods d_methods(const ToeplitzSkeleton& skel, std::size_t n, const Budget& budget = {});
// Throws Inconsistency when the available methods disagree.
Rational d_exact(const ToeplitzSkeleton& skel, std::size_t n, const Budget& budget = {});

enum class TailKind { Bounded, Unbounded, Unknown };
std::string tail_kind_name(TailKind k);

struct LSeries {
  std::size_t terms = 0;  // number of |D_j|/|D_{j+1}| terms after 1/|D_1|
  Rational partial;       // 1/|D_1| + sum_{j=1}^{terms} |D_j|/|D_{j+1}|
  TailKind tail = TailKind::Unknown;
  Rational tail_bound;    // valid when tail == Bounded
};

// Tail = remaining configured terms plus the declared geometric continuation.
LSeries l_series(const QuotientTower& tower, std::size_t terms);

enum class Verdict { Regular, Irregular, Inconclusive };
std::string verdict_name(Verdict v);

struct DensityReport {
  std::size_t levels = 0;
  std::vector<Rational> d_seq;  // d_1..d_levels
  LSeries L;                    // all configured terms
  Rational product_partial;     // (1 - 1/|D_1|) prod_{j=1}^{levels-1} (1 - |D_j|/|D_{j+1}|) = 1 - d_levels
  Interval d_interval;
  std::optional<Interval> exp_neg_2L;  // certified enclosure of exp(-2 * (partial + tail))
  bool quarter_condition = false;      // 1 - exp(-2L) < 1/4 certified
  bool d_below_half = false;           // d_interval.hi < 1/2
  Verdict verdict = Verdict::Inconclusive;
  std::string explanation;
};

// exp(-x) for rational x >= 0 by alternating Taylor partial sums; width below `width`.
Interval exp_neg_enclosure(const Rational& x, const Rational& width);

// Uses tower data only; levels defaults to the tower depth.
DensityReport regularity_verdict(const QuotientTower& tower, std::optional<std::size_t> levels = std::nullopt);

nlohmann::json to_json(const DensityReport& r);

}  // namespace toeplitz
