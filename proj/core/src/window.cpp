#include <algorithm>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "toeplitz/errors.hpp"
#include "toeplitz/skeleton.hpp"

namespace toeplitz {

SymbolWindow::SymbolWindow(std::size_t level, std::uint64_t length)
    : level_(level), length_(length), undefined_(length), bits_((length + 63) / 64, 0), mask_((length + 63) / 64, 0) {}

void SymbolWindow::set(std::uint64_t i, int v) {
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  const bool was_defined = mask_[i >> 6] & bit;
  if (v < 0) {
    if (was_defined) ++undefined_;
    mask_[i >> 6] &= ~bit;
    bits_[i >> 6] &= ~bit;
    return;
  }
  if (!was_defined) --undefined_;
  mask_[i >> 6] |= bit;
  if (v) {
    bits_[i >> 6] |= bit;
  } else {
    bits_[i >> 6] &= ~bit;
  }
}

std::uint64_t SymbolWindow::count_ones() const {
  std::uint64_t c = 0;
  for (std::uint64_t w : bits_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

bool operator==(const SymbolWindow& a, const SymbolWindow& b) {
  return a.level_ == b.level_ && a.length_ == b.length_ && a.bits_ == b.bits_ && a.mask_ == b.mask_;
}

SymbolWindow materialize_window(const ToeplitzSkeleton& skel, std::size_t n, const Budget& budget) {
  const QuotientTower& t = skel.tower();
  t.check_level(n);
  const BigInt& size = t.domain_size(n);
  if (size > from_uint64(budget.window_bits)) {
    throw BudgetExceeded("|D_" + std::to_string(n) + "| = " + size.get_str() + " bits exceeds the window budget " +
                         std::to_string(budget.window_bits));
  }
  const std::uint64_t len = to_uint64(size);
  SymbolWindow w(n, len);
  if (skel.fast_ok() && t.fast_ok(n)) {
    const std::size_t dim = t.dim();
    std::vector<std::int64_t> c(dim), lo(dim), hi(dim);
    for (std::size_t a = 0; a < dim; ++a) {
      lo[a] = t.fast_low(n, a);
      hi[a] = lo[a] + t.fast_modulus(n, a);
      c[a] = lo[a];
    }
    for (std::uint64_t idx = 0; idx < len; ++idx) {
      const int v = skel.eval_fast(c.data());
      if (v >= 0) w.set(idx, v);
      for (std::size_t a = 0; a < dim; ++a) {
        if (++c[a] < hi[a]) break;
        c[a] = lo[a];
      }
    }
    return w;
  }
  for (std::uint64_t idx = 0; idx < len; ++idx) {
    auto v = skel.eval(t.element_at(n, idx));
    if (v) w.set(idx, *v);
  }
  return w;
}

namespace {

constexpr char kMagicPlain[4] = {'T', 'P', 'L', 'Z'};
constexpr char kMagicMasked[4] = {'T', 'P', 'L', 'M'};

void put_le(std::ostream& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::istream& in, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw ConfigError("truncated window file");
    v |= static_cast<std::uint64_t>(c & 0xff) << (8 * i);
  }
  return v;
}

void put_words(std::ostream& out, const std::vector<std::uint64_t>& words, std::uint64_t length) {
  const std::uint64_t nbytes = (length + 7) / 8;
  for (std::uint64_t b = 0; b < nbytes; ++b) out.put(static_cast<char>((words[b / 8] >> (8 * (b % 8))) & 0xff));
}

std::vector<std::uint64_t> get_words(std::istream& in, std::uint64_t length) {
  std::vector<std::uint64_t> words((length + 63) / 64, 0);
  const std::uint64_t nbytes = (length + 7) / 8;
  for (std::uint64_t b = 0; b < nbytes; ++b) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw ConfigError("truncated window file");
    words[b / 8] |= static_cast<std::uint64_t>(c & 0xff) << (8 * (b % 8));
  }
  return words;
}

}  // namespace

void write_window_bits(std::ostream& out, const SymbolWindow& w) {
  out.write(w.complete() ? kMagicPlain : kMagicMasked, 4);
  put_le(out, w.level(), 4);
  put_le(out, w.length(), 8);
  put_words(out, w.bits(), w.length());
  if (!w.complete()) put_words(out, w.mask(), w.length());
}

SymbolWindow read_window_bits(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4)) throw ConfigError("truncated window file");
  const bool masked = std::memcmp(magic, kMagicMasked, 4) == 0;
  if (!masked && std::memcmp(magic, kMagicPlain, 4) != 0) throw ConfigError("not a window file (bad magic)");
  const auto level = static_cast<std::size_t>(get_le(in, 4));
  const std::uint64_t length = get_le(in, 8);
  const auto bits = get_words(in, length);
  std::vector<std::uint64_t> mask;
  if (masked) mask = get_words(in, length);
  SymbolWindow w(level, length);
  for (std::uint64_t i = 0; i < length; ++i) {
    const bool def = !masked || ((mask[i >> 6] >> (i & 63)) & 1u);
    if (def) w.set(i, static_cast<int>((bits[i >> 6] >> (i & 63)) & 1u));
  }
  return w;
}

void write_window_csv(std::ostream& out, const SymbolWindow& w, const QuotientTower& t) {
  for (std::size_t a = 0; a < t.dim(); ++a) out << (t.is_box() ? "x" + std::to_string(a) : std::string("g")) << ',';
  out << "symbol\n";
  for (std::uint64_t i = 0; i < w.length(); ++i) {
    const Element e = t.element_at(w.level(), i);
    for (const auto& c : e.coords()) out << c.get_str() << ',';
    const int v = w.get(i);
    out << (v < 0 ? "?" : std::to_string(v)) << '\n';
  }
}

SymbolWindow read_window_csv(std::istream& in, const QuotientTower& t, std::size_t level) {
  const std::uint64_t len = to_uint64(t.domain_size(level));
  SymbolWindow w(level, len);
  std::string line;
  std::getline(in, line);  // header
  std::uint64_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cut = line.rfind(',');
    if (cut == std::string::npos) throw ConfigError("malformed csv row: " + line);
    const Element e = parse_element(line.substr(0, cut));
    const std::string sym = line.substr(cut + 1);
    const std::uint64_t idx = t.index_of(e, level);
    if (sym == "0" || sym == "1") {
      w.set(idx, sym == "1");
    } else if (sym != "?") {
      throw ConfigError("bad symbol in csv row: " + line);
    }
    ++rows;
  }
  if (rows != len) throw ConfigError("csv has " + std::to_string(rows) + " rows, expected " + std::to_string(len));
  return w;
}

void write_window_pgm(std::ostream& out, const SymbolWindow& w, const QuotientTower& t) {
  std::uint64_t width = w.length();
  if (t.is_box() && t.dim() >= 2) {
    width = to_uint64(t.axis_modulus(w.level(), 0));
  } else if (w.level() >= 1) {
    width = to_uint64(t.domain_size(w.level() - 1));
  }
  width = std::max<std::uint64_t>(width, 1);
  const std::uint64_t height = (w.length() + width - 1) / width;
  out << "P5\n" << width << ' ' << height << "\n255\n";
  for (std::uint64_t i = 0; i < width * height; ++i) {
    const int v = i < w.length() ? w.get(i) : -1;
    out.put(static_cast<char>(v < 0 ? 128 : (v ? 0 : 255)));
  }
}

}  // namespace toeplitz
