#pragma once

#include <cstdint>
#include <vector>

#include "toeplitz/tower.hpp"

namespace toeplitz::detail {

// 64-bit coordinate helpers for box towers (valid while tower.fast_ok(level)).
struct FastBox {
  const QuotientTower& t;

  std::size_t dim() const { return t.dim(); }

  void reduce(const std::int64_t* in, std::size_t n, std::int64_t* out) const {
    for (std::size_t a = 0; a < t.dim(); ++a) out[a] = t.fast_reduce(in[a], n, a);
  }

  bool in_domain(const std::int64_t* c, std::size_t n) const {
    for (std::size_t a = 0; a < t.dim(); ++a) {
      if (!t.fast_in_domain(c[a], n, a)) return false;
    }
    return true;
  }

  // c must lie in D_n; axis 0 varies fastest.
  std::uint64_t index(const std::int64_t* c, std::size_t n) const {
    std::uint64_t idx = 0;
    for (std::size_t a = t.dim(); a-- > 0;) {
      idx = idx * static_cast<std::uint64_t>(t.fast_modulus(n, a)) + static_cast<std::uint64_t>(c[a] - t.fast_low(n, a));
    }
    return idx;
  }

  void coords(std::size_t n, std::uint64_t idx, std::int64_t* out) const {
    for (std::size_t a = 0; a < t.dim(); ++a) {
      const auto m = static_cast<std::uint64_t>(t.fast_modulus(n, a));
      out[a] = static_cast<std::int64_t>(idx % m) + t.fast_low(n, a);
      idx /= m;
    }
  }

  std::vector<std::int64_t> from(const Element& e) const {
    std::vector<std::int64_t> c(t.dim());
    for (std::size_t a = 0; a < t.dim(); ++a) c[a] = to_int64(e[a]);
    return c;
  }
};

}  // namespace toeplitz::detail
