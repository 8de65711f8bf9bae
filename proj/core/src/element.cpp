#include "toeplitz/element.hpp"

#include <cctype>

#include "toeplitz/errors.hpp"

namespace toeplitz {

Element::Element(std::initializer_list<long> coords) {
  coords_.reserve(coords.size());
  for (long c : coords) coords_.emplace_back(c);
}

bool operator<(const Element& a, const Element& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

std::string Element::to_string() const {
  if (coords_.size() == 1) return coords_[0].get_str();
  std::string out = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ',';
    out += coords_[i].get_str();
  }
  return out + ")";
}

std::size_t ElementHash::operator()(const Element& e) const {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (const auto& c : e.coords()) {
    std::size_t limb = mpz_size(c.get_mpz_t()) ? mpz_getlimbn(c.get_mpz_t(), 0) : 0;
    limb ^= static_cast<std::size_t>(mpz_sgn(c.get_mpz_t()) + 1) << 61;
    h ^= std::hash<std::size_t>{}(limb) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

Element parse_element(std::string_view text) {
  std::string cleaned;
  for (char ch : text) {
    if (ch == '(' || ch == ')' || ch == '[' || ch == ']' || std::isspace(static_cast<unsigned char>(ch))) continue;
    cleaned += ch;
  }
  if (cleaned.empty()) throw ConfigError("empty element");
  std::vector<BigInt> coords;
  std::size_t start = 0;
  while (start <= cleaned.size()) {
    std::size_t comma = cleaned.find(',', start);
    std::string part = cleaned.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    BigInt v;
    if (part.empty() || v.set_str(part, 10) != 0) {
      throw ConfigError("malformed element coordinate '" + part + "' in '" + std::string(text) + "'");
    }
    coords.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return Element(std::move(coords));
}

}  // namespace toeplitz
