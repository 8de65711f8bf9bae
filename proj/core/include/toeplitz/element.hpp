#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "toeplitz/rational.hpp"

namespace toeplitz {

// A group element as an integer tuple. Integer towers use one coordinate per
// axis; table towers use a single coordinate holding the element's table index.
class Element {
 public:
  Element() = default;
  explicit Element(std::vector<BigInt> coords) : coords_(std::move(coords)) {}
  Element(std::initializer_list<long> coords);

  static Element scalar(const BigInt& v) { return Element(std::vector<BigInt>{v}); }

  const std::vector<BigInt>& coords() const { return coords_; }
  std::vector<BigInt>& coords() { return coords_; }
  std::size_t size() const { return coords_.size(); }
  const BigInt& operator[](std::size_t i) const { return coords_[i]; }
  BigInt& operator[](std::size_t i) { return coords_[i]; }

  friend bool operator==(const Element& a, const Element& b) { return a.coords_ == b.coords_; }
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }
  friend bool operator<(const Element& a, const Element& b);

  // "14" for one coordinate, "(3,-4)" otherwise.
  std::string to_string() const;

 private:
  std::vector<BigInt> coords_;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const;
};

// Accepts "14", "-3", "3,4", "(3,4)" and "[3, 4]".
Element parse_element(std::string_view text);

}  // namespace toeplitz
