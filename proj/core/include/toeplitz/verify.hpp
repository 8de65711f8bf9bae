#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "toeplitz/budget.hpp"
#include "toeplitz/check.hpp"
#include "toeplitz/skeleton.hpp"

namespace toeplitz {

struct VerifyContext {
  SkeletonPtr skel;
  Budget budget;
  std::uint64_t seed = 20240601;
  std::uint64_t samples = 10000;
  // Upper bound for the level n of level-indexed checks; defaults to the skeleton depth.
  std::optional<std::size_t> max_level;

  std::size_t top() const;
};

// Elements gamma of Gamma_{n+1} cap D_m outside D_{n+1}Gamma_{n+2} u ... u D_{m-1}Gamma_m.
struct GoodRelation {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<Element> qualifying;
  Rational bound;                       // |D_m|/|D_{n+1}| prod_{l=1}^{m-n-1} (1 - |D_{n+l}|/|D_{n+l+1}|)
  std::optional<std::string> containment_failure;  // gamma*D_{n+1} not inside the same difference set

  std::size_t count() const { return qualifying.size(); }
};

// Requires m >= n + 2 and m <= tower depth.
GoodRelation good_relation(const QuotientTower& t, std::size_t n, std::size_t m, const Budget& budget = {});

struct PatchStats {
  std::uint64_t qualifying = 0;
  std::uint64_t patching = 0;       // gamma_0 satisfying eta(gamma_0 gamma u) = eta(u)
  std::uint64_t in_u = 0;           // ... and sigma^{gamma_0^-1} eta in U_n
  std::uint64_t patch_failed = 0;
  std::uint64_t undetermined = 0;
  std::optional<std::string> violation;
  std::vector<Element> in_u_witnesses;
};

// Patching and U_n membership for the qualifying gamma_0 of (n, m).
PatchStats good_patches_scan(SkeletonPtr skel, std::size_t n, std::size_t m, const Budget& budget = {});

struct ContainmentStats {
  std::uint64_t representatives = 0;
  std::uint64_t premise = 0;      // representatives in U_n (resp. Y_n)
  std::uint64_t conclusion = 0;   // ... that also lie in Y_n (resp. every shift lies in Z_n)
  std::uint64_t undetermined = 0;
  std::optional<std::string> violation;
};

// Orbit representatives: D_{n+1} together with the good-patches gamma_0 of (n, m), n+2 <= m <= depth.
std::vector<Element> orbit_representatives(SkeletonPtr skel, std::size_t n, const Budget& budget = {});
ContainmentStats u_in_y_scan(SkeletonPtr skel, std::size_t n, const Budget& budget = {});
ContainmentStats y_in_z_scan(SkeletonPtr skel, std::size_t n, const Budget& budget = {});

using CheckFn = std::function<CheckResult(const VerifyContext&)>;

struct CheckInfo {
  std::string name;
  std::string statement;
  CheckFn run;
};

const std::vector<CheckInfo>& check_registry();
std::vector<std::string> check_names();

// Throws UnknownCheck. Depth and budget shortfalls inside a check become Inconclusive.
CheckResult run_check(const VerifyContext& ctx, const std::string& name);

struct SuiteReport {
  std::vector<CheckResult> results;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t inconclusive = 0;
  std::size_t vacated = 0;

  bool any_failed() const { return failed > 0; }
};

SuiteReport run_all(const VerifyContext& ctx);
nlohmann::json to_json(const SuiteReport& r);

}  // namespace toeplitz
