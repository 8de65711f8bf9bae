#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "toeplitz/presets.hpp"
#include "toeplitz/skeleton.hpp"

namespace toeplitz::fixtures {

// Skeletons are deterministic, so one instance per (preset, depth) is shared across tests.
inline SkeletonPtr preset_skeleton(const std::string& name, std::size_t depth) {
  static std::map<std::pair<std::string, std::size_t>, SkeletonPtr> cache;
  auto key = std::make_pair(name, depth);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  SkeletonPtr s = build_skeleton(build_tower(preset_config(name)), depth);
  cache.emplace(key, s);
  return s;
}

inline SkeletonPtr line_skeleton(const std::vector<std::int64_t>& indices, std::size_t depth,
                                 DomainStyle style = DomainStyle::NonNegative) {
  return build_skeleton(build_tower(line_config(indices, style)), depth);
}

inline std::vector<std::int64_t> ints(const std::vector<Element>& v) {
  std::vector<std::int64_t> out;
  for (const auto& e : v) out.push_back(e[0].get_si());
  return out;
}

// Seeded generator of group elements for property tests.
class ElementGen {
 public:
  ElementGen(const QuotientTower& t, std::uint64_t seed) : t_(t), rng_(seed) {}

  // Uniform element of D_n.
  Element in_domain(std::size_t n) {
    std::uniform_int_distribution<std::uint64_t> pick(0, t_.enumerable_size(n) - 1);
    return t_.element_at(n, pick(rng_));
  }
  // Arbitrary integer element with coordinates in [-bound, bound].
  Element any(std::int64_t bound) {
    std::uniform_int_distribution<std::int64_t> pick(-bound, bound);
    std::vector<BigInt> c;
    for (std::size_t i = 0; i < t_.dim(); ++i) c.emplace_back(static_cast<long>(pick(rng_)));
    return Element(c);
  }
  // Element of Gamma_i cap D_j.
  Element in_subgroup(std::size_t i, std::size_t j) { return t_.tile_decompose(in_domain(j), j, i).first; }

  std::mt19937_64& rng() { return rng_; }

 private:
  const QuotientTower& t_;
  std::mt19937_64 rng_;
};

}  // namespace toeplitz::fixtures
