#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "toeplitz/budget.hpp"
#include "toeplitz/check.hpp"
#include "toeplitz/measures.hpp"
#include "toeplitz/skeleton.hpp"

namespace toeplitz {

// Finite-depth point of the odometer: cosets[n-1] = c_n in D_n for n = 1..depth.
struct OdometerPoint {
  std::size_t depth = 0;
  std::vector<Element> cosets;
};

bool coherent(const QuotientTower& t, const OdometerPoint& p);
// g acting on every coordinate
OdometerPoint odometer_act(const QuotientTower& t, const Element& g, const OdometerPoint& p);

// pi(sigma^{v^-1} eta) = (reduce(v, n))_{n <= depth}.
OdometerPoint pi_of_orbit(const ToeplitzSkeleton& skel, const Element& v, std::size_t depth);
// Same point found by searching w in D_n with sigma^{v^-1} eta in sigma^{w^-1} C_n.
OdometerPoint pi_by_membership(const OrbitOracle& oracle, const Element& v, std::size_t depth, const Budget& budget = {});

Rational haar_cylinder(const QuotientTower& t, const Element& c, std::size_t n);
// Fraction of level-n cosets c whose symbol is forced by Gamma_n-periodicity.
Rational toeplitz_mass_estimate(const ToeplitzSkeleton& skel, std::size_t n, const Budget& budget = {});
// mu_m-mass of the points whose level-n odometer coordinate is c.
Rational pushforward_mass(const PeriodicMeasure& mu_m, const Element& c, std::size_t n, const Budget& budget = {});

struct FiberEntry {
  Element coset;
  std::uint64_t lifts = 0;
  std::uint64_t windows = 0;    // distinct D_w patterns among the lifts
  std::uint64_t undefined = 0;  // lifts with a value beyond the constructed depth
  bool forced = false;          // every c*g, g in D_w, is Gamma_n-periodic
};

struct FiberProfile {
  std::size_t level = 0;
  std::size_t window_level = 0;
  std::vector<FiberEntry> entries;
};

// Lifts v = gamma*c, gamma in Gamma_n cap D_{n+1}; window of sigma^{v^-1} eta on D_window_level.
FiberProfile fiber_profile(const ToeplitzSkeleton& skel, std::size_t n, std::optional<std::size_t> window_level = {},
                           const Budget& budget = {});

// pi agrees with the membership definition, is coherent and equivariant.
CheckResult pimap_check(SkeletonPtr skel, std::size_t max_level, std::size_t samples, std::uint64_t seed,
                        const Budget& budget = {});

}  // namespace toeplitz
