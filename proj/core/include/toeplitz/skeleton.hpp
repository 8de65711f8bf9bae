#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "toeplitz/budget.hpp"
#include "toeplitz/element.hpp"
#include "toeplitz/tower.hpp"

namespace toeplitz {

struct JSet {
  std::size_t level = 0;
  std::vector<Element> elements;  // tower enumeration order
};

// J(n) = D_n minus the union of J(i)Gamma_{i+1}, i < n, computed from the definition.
JSet j_set(const QuotientTower& tower, std::size_t n, const Budget& budget = {});
// J(n) through J(n) = union of gamma*J(n-1), gamma in (D_n cap Gamma_{n-1}) \ {1}; level 1 is taken from the definition.
JSet j_set_recursive(const QuotientTower& tower, std::size_t n, const Budget& budget = {});
// One application of the recursion to an arbitrary previous level.
JSet j_recursion_step(const QuotientTower& tower, const JSet& prev, const Budget& budget = {});
// |J(n)| = (index_n - 1) * |J(n-1)|, no enumeration.
BigInt j_size(const QuotientTower& tower, std::size_t n);

// Minimal i < max_level with reduce(g, i+1) in D_i, i.e. g in J(i)Gamma_{i+1}.
std::optional<std::size_t> covering_level(const QuotientTower& tower, const Element& g, std::size_t max_level);

struct HRecord {
  std::size_t step = 0;   // construction step s+1
  std::size_t block = 0;  // k
  std::size_t slot = 0;   // s'+1
  Element h;              // chosen element of J(s), in g^k_{slot} Gamma_k
  Element target;         // g^k_{slot}
};

struct StepPlan {
  std::size_t step = 0;
  std::size_t block = 0;
  std::size_t slot = 0;  // 0 for a zero step
  bool plants = false;
};

class ToeplitzSkeleton {
 public:
  const QuotientTower& tower() const { return *tower_; }
  const TowerPtr& tower_ptr() const { return tower_; }
  std::size_t depth() const { return depth_; }

  // m(k) = |J(k)| for k = 0..tower depth.
  const std::vector<BigInt>& m_of() const { return m_of_; }
  // m_k = 1 + k + sum_{i<=k} m(i) for k = 0..tower depth.
  const std::vector<BigInt>& m_k() const { return m_k_; }
  // One record per planted step s+1 >= 3 (step 1 plants on Gamma_1 and is implicit).
  const std::vector<HRecord>& h_records() const { return h_records_; }
  // linking_ok()[k]: verdict for block k; nullopt when the block is not yet checkable.
  const std::vector<std::optional<bool>>& linking_ok() const { return linking_ok_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  StepPlan plan(std::size_t step) const;
  // Element planted with a 1 at this step (identity for step 1), or nullptr for a zero step.
  const Element* planted(std::size_t step) const;

  // Block k is completed once step m_k has run.
  bool block_completed(std::size_t k) const;
  // n_k = m_k - 1 for every completed block.
  std::vector<std::size_t> subsequence() const;
  bool in_subsequence(std::size_t n) const;

  std::optional<std::size_t> level_of(const Element& g) const;
  // 0, 1, or nullopt when g escapes the constructed levels.
  std::optional<int> eval(const Element& g) const;

  // 64-bit path for box towers; coords must hold dim() values below 2^61 in magnitude.
  bool fast_ok() const { return fast_; }
  int level_of_fast(const std::int64_t* coords) const;  // -1 beyond depth
  int eval_fast(const std::int64_t* coords) const;      // -1 undefined

  nlohmann::json to_json() const;

 private:
  friend std::shared_ptr<const ToeplitzSkeleton> build_skeleton(TowerPtr, std::size_t, const Budget&);
  ToeplitzSkeleton() = default;

  TowerPtr tower_;
  std::size_t depth_ = 0;
  std::vector<BigInt> m_of_;
  std::vector<BigInt> m_k_;
  std::vector<std::optional<Element>> planted_;  // index = step
  std::vector<HRecord> h_records_;
  std::vector<std::optional<bool>> linking_ok_;
  std::vector<std::string> warnings_;
  bool fast_ = false;
  std::vector<std::vector<std::int64_t>> planted_fast_;  // empty vector for zero steps
};

using SkeletonPtr = std::shared_ptr<const ToeplitzSkeleton>;

// Runs construction steps 1..depth. Requires depth <= tower depth - 1.
SkeletonPtr build_skeleton(TowerPtr tower, std::size_t depth, const Budget& budget = {});

// Rebuilds the skeleton described by a file written with ToeplitzSkeleton::to_json
// and verifies the stored step records against the rebuild.
SkeletonPtr load_skeleton(const nlohmann::json& j, const Budget& budget = {});

class SymbolWindow {
 public:
  SymbolWindow() = default;
  SymbolWindow(std::size_t level, std::uint64_t length);

  std::size_t level() const { return level_; }
  std::uint64_t length() const { return length_; }
  bool complete() const { return undefined_ == 0; }
  std::uint64_t undefined_count() const { return undefined_; }

  bool defined(std::uint64_t i) const { return (mask_[i >> 6] >> (i & 63)) & 1u; }
  int bit(std::uint64_t i) const { return static_cast<int>((bits_[i >> 6] >> (i & 63)) & 1u); }
  // -1 when undefined
  int get(std::uint64_t i) const { return defined(i) ? bit(i) : -1; }
  void set(std::uint64_t i, int v);

  std::uint64_t count_ones() const;
  std::size_t byte_size() const { return (bits_.size() + mask_.size()) * sizeof(std::uint64_t); }

  const std::vector<std::uint64_t>& bits() const { return bits_; }
  const std::vector<std::uint64_t>& mask() const { return mask_; }

  friend bool operator==(const SymbolWindow& a, const SymbolWindow& b);

 private:
  std::size_t level_ = 0;
  std::uint64_t length_ = 0;
  std::uint64_t undefined_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint64_t> mask_;
};

// bits[idx(d)] = eval(d) for d in D_n; cells beyond the construction are masked out.
SymbolWindow materialize_window(const ToeplitzSkeleton& skel, std::size_t n, const Budget& budget = {});

// Binary dump: 16-byte header (magic "TPLZ", or "TPLM" when a mask follows the
// bits; level as u32 LE; length as u64 LE), then packed little-endian bits.
void write_window_bits(std::ostream& out, const SymbolWindow& w);
SymbolWindow read_window_bits(std::istream& in);
// One row per element: coordinates then symbol (0, 1 or ?).
void write_window_csv(std::ostream& out, const SymbolWindow& w, const QuotientTower& tower);
SymbolWindow read_window_csv(std::istream& in, const QuotientTower& tower, std::size_t level);
// Binary PGM raster: lines are rows of D_{n-1} translates (line) or the axis grid (dim 2).
void write_window_pgm(std::ostream& out, const SymbolWindow& w, const QuotientTower& tower);

}  // namespace toeplitz
