#include "toeplitz/tower.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <unordered_set>

#include "toeplitz/errors.hpp"

namespace toeplitz {

namespace {

const BigInt kFastLimit = BigInt(1) << 60;

}  // namespace

QuotientTower::QuotientTower(TowerConfig config) : config_(std::move(config)) {
  if (config_.kind == TowerKind::Generic) {
    init_table();
  } else {
    init_box();
  }
}

void QuotientTower::init_box() {
  if (config_.kind == TowerKind::IntegerLine) config_.dim = 1;
  if (config_.dim == 0) throw ConfigError("lattice dimension must be positive");
  if (config_.indices.empty()) throw ConfigError("tower needs at least one level");
  depth_ = config_.indices.size();
  size_.assign(1, BigInt(1));
  index_.assign(1, BigInt(1));
  mod_.assign(1, std::vector<BigInt>(config_.dim, BigInt(1)));
  for (std::size_t n = 1; n <= depth_; ++n) {
    const auto& row = config_.indices[n - 1];
    if (row.size() != config_.dim) {
      throw ConfigError("level " + std::to_string(n) + " lists " + std::to_string(row.size()) +
                        " axis indices, expected " + std::to_string(config_.dim));
    }
    std::vector<BigInt> m(config_.dim);
    BigInt idx = 1;
    for (std::size_t a = 0; a < config_.dim; ++a) {
      // A lattice axis may stay put for a level (index 1) as long as the level index is >= 2.
      const bool lattice = config_.kind == TowerKind::IntegerLattice;
      if (row[a] < (lattice ? 1 : 2)) {
        throw InvalidIndex("index " + std::to_string(row[a]) + " at level " + std::to_string(n) + " is below 2");
      }
      m[a] = mod_[n - 1][a] * BigInt(static_cast<long>(row[a]));
      idx *= BigInt(static_cast<long>(row[a]));
      if (config_.style == DomainStyle::Centered && mpz_even_p(m[a].get_mpz_t())) {
        throw ParityError("centered domains need odd moduli; level " + std::to_string(n) + " has modulus " +
                          m[a].get_str());
      }
    }
    if (idx < 2) throw InvalidIndex("level " + std::to_string(n) + " does not shrink the subgroup");
    mod_.push_back(std::move(m));
    index_.push_back(idx);
    size_.push_back(size_.back() * idx);
  }
  fast_mod_.clear();
  fast_depth_ = 0;
  for (std::size_t n = 0; n <= depth_; ++n) {
    bool ok = true;
    for (const auto& m : mod_[n]) ok = ok && m < kFastLimit;
    if (!ok) break;
    std::vector<std::int64_t> row;
    for (const auto& m : mod_[n]) row.push_back(to_int64(m));
    fast_mod_.push_back(std::move(row));
    fast_depth_ = n + 1;
  }
  abelian_ = true;
}

void QuotientTower::init_table() {
  if (!config_.table) throw ConfigError("table tower without a table");
  const GroupTable& t = *config_.table;
  const int order = static_cast<int>(t.mul.size());
  if (order == 0) throw ConfigError("empty multiplication table");
  for (const auto& row : t.mul) {
    if (static_cast<int>(row.size()) != order) throw ConfigError("multiplication table is not square");
    std::vector<char> seen(order, 0);
    for (int v : row) {
      if (v < 0 || v >= order) throw ConfigError("multiplication table entry out of range");
      if (seen[v]++) throw ConfigError("multiplication table row is not a permutation");
    }
  }
  identity_ = -1;
  for (int e = 0; e < order && identity_ < 0; ++e) {
    bool ok = true;
    for (int x = 0; x < order && ok; ++x) ok = t.mul[e][x] == x && t.mul[x][e] == x;
    if (ok) identity_ = e;
  }
  if (identity_ < 0) throw ConfigError("multiplication table has no identity");
  inverse_.assign(order, -1);
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b) {
      if (t.mul[a][b] == identity_) inverse_[a] = b;
    }
    if (inverse_[a] < 0 || t.mul[inverse_[a]][a] != identity_) throw ConfigError("element without inverse");
  }
  if (order <= 200) {
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b)
        for (int c = 0; c < order; ++c)
          if (t.mul[t.mul[a][b]][c] != t.mul[a][t.mul[b][c]]) throw ConfigError("multiplication is not associative");
  }
  abelian_ = true;
  for (int a = 0; a < order && abelian_; ++a)
    for (int b = 0; b < order && abelian_; ++b) abelian_ = t.mul[a][b] == t.mul[b][a];

  if (t.levels.empty()) throw ConfigError("table tower needs at least one level");
  depth_ = t.levels.size();
  config_.dim = 1;
  coset_.assign(1, std::vector<int>(order, 0));
  domain_.assign(1, std::vector<int>{identity_});
  std::vector<int> prev_members(order);
  for (int g = 0; g < order; ++g) prev_members[g] = g;
  size_.assign(1, BigInt(1));
  index_.assign(1, BigInt(1));
  config_.indices.clear();
  for (std::size_t n = 1; n <= depth_; ++n) {
    const auto& lvl = t.levels[n - 1];
    if (static_cast<int>(lvl.coset.size()) != order) throw ConfigError("coset labels must cover every element");
    // relabel cosets as 0..k-1 in order of first appearance
    std::vector<int> label(order);
    std::vector<std::pair<int, int>> remap;
    int next = 0;
    for (int g = 0; g < order; ++g) {
      auto it = std::find_if(remap.begin(), remap.end(), [&](auto& p) { return p.first == lvl.coset[g]; });
      if (it == remap.end()) {
        remap.emplace_back(lvl.coset[g], next);
        label[g] = next++;
      } else {
        label[g] = it->second;
      }
    }
    const int home = label[identity_];
    std::vector<int> members;
    for (int g = 0; g < order; ++g)
      if (label[g] == home) members.push_back(g);
    // cosets must be the left cosets of a normal subgroup contained in the previous one
    for (int a = 0; a < order; ++a) {
      for (int b = 0; b < order; ++b) {
        const bool same = label[a] == label[b];
        const bool quotient = label[t.mul[inverse_[a]][b]] == home;
        if (same != quotient) throw ConfigError("level " + std::to_string(n) + " labels are not cosets of a subgroup");
      }
    }
    for (int g : members) {
      if (coset_[n - 1][g] != coset_[n - 1][identity_]) {
        throw ConfigError("level " + std::to_string(n) + " subgroup is not contained in the previous one");
      }
      for (int x = 0; x < order; ++x) {
        if (label[t.mul[t.mul[x][g]][inverse_[x]]] != home) {
          throw ConfigError("level " + std::to_string(n) + " subgroup is not normal");
        }
      }
    }
    const std::size_t prev_size = prev_members.size();
    if (prev_size % members.size() != 0 || prev_size / members.size() < 2) {
      throw InvalidIndex("level " + std::to_string(n) + " has index below 2");
    }
    config_.indices.push_back({static_cast<std::int64_t>(prev_size / members.size())});
    index_.push_back(BigInt(static_cast<long>(prev_size / members.size())));
    size_.push_back(BigInt(static_cast<long>(next)));
    for (int d : lvl.domain) {
      if (d < 0 || d >= order) throw ConfigError("domain element out of range");
    }
    coset_.push_back(label);
    domain_.push_back(lvl.domain);
    prev_members = members;
  }
  rep_.assign(depth_ + 1, {});
  position_.assign(depth_ + 1, std::vector<int>(order, -1));
  for (std::size_t n = 0; n <= depth_; ++n) {
    const int cosets = n == 0 ? 1 : static_cast<int>(size_[n].get_si());
    rep_[n].assign(cosets, -1);
    for (std::size_t i = 0; i < domain_[n].size(); ++i) {
      const int d = domain_[n][i];
      if (position_[n][d] < 0) position_[n][d] = static_cast<int>(i);
      if (rep_[n][coset_[n][d]] < 0) rep_[n][coset_[n][d]] = d;
    }
  }
}

const BigInt& QuotientTower::domain_size(std::size_t n) const {
  check_level(n);
  return size_[n];
}

const BigInt& QuotientTower::level_index(std::size_t n) const {
  check_level(n);
  if (n == 0) throw DepthExceeded("level index is defined for n >= 1");
  return index_[n];
}

const BigInt& QuotientTower::axis_modulus(std::size_t n, std::size_t axis) const {
  check_level(n);
  if (!is_box()) throw Unsupported("axis moduli exist only for integer towers");
  return mod_[n].at(axis);
}

void QuotientTower::check_level(std::size_t n) const {
  if (n > depth_) {
    throw DepthExceeded("level " + std::to_string(n) + " exceeds tower depth " + std::to_string(depth_));
  }
}

void QuotientTower::check_element(const Element& g) const {
  if (g.size() != config_.dim) {
    throw ConfigError("element " + g.to_string() + " has " + std::to_string(g.size()) + " coordinates, expected " +
                      std::to_string(config_.dim));
  }
  if (!is_box()) {
    const auto order = static_cast<long>(config_.table->mul.size());
    if (g[0] < 0 || g[0] >= order) throw ConfigError("table element " + g.to_string() + " out of range");
  }
}

Element QuotientTower::identity() const {
  if (is_box()) return Element(std::vector<BigInt>(config_.dim, BigInt(0)));
  return Element::scalar(BigInt(identity_));
}

bool QuotientTower::is_identity(const Element& g) const { return g == identity(); }

Element QuotientTower::mul(const Element& a, const Element& b) const {
  if (is_box()) {
    std::vector<BigInt> c(config_.dim);
    for (std::size_t i = 0; i < config_.dim; ++i) c[i] = a[i] + b[i];
    return Element(std::move(c));
  }
  check_element(a);
  check_element(b);
  return Element::scalar(BigInt(config_.table->mul[a[0].get_si()][b[0].get_si()]));
}

Element QuotientTower::inv(const Element& a) const {
  if (is_box()) {
    std::vector<BigInt> c(config_.dim);
    for (std::size_t i = 0; i < config_.dim; ++i) c[i] = -a[i];
    return Element(std::move(c));
  }
  check_element(a);
  return Element::scalar(BigInt(inverse_[a[0].get_si()]));
}

BigInt QuotientTower::axis_low(std::size_t n, std::size_t axis) const {
  if (config_.style == DomainStyle::Centered) return -((mod_[n][axis] - 1) / 2);
  return 0;
}

Element QuotientTower::reduce(const Element& g, std::size_t n) const {
  check_level(n);
  check_element(g);
  if (is_box()) {
    std::vector<BigInt> c(config_.dim);
    for (std::size_t a = 0; a < config_.dim; ++a) {
      const BigInt& m = mod_[n][a];
      mpz_fdiv_r(c[a].get_mpz_t(), g[a].get_mpz_t(), m.get_mpz_t());
      if (config_.style == DomainStyle::Centered && c[a] > (m - 1) / 2) c[a] -= m;
    }
    return Element(std::move(c));
  }
  const int r = rep_[n][coset_[n][g[0].get_si()]];
  if (r < 0) {
    throw NotInDomain("coset of " + g.to_string() + " has no representative in D_" + std::to_string(n));
  }
  return Element::scalar(BigInt(r));
}

bool QuotientTower::in_domain(const Element& g, std::size_t n) const {
  check_level(n);
  check_element(g);
  if (is_box()) {
    for (std::size_t a = 0; a < config_.dim; ++a) {
      const BigInt& m = mod_[n][a];
      if (config_.style == DomainStyle::Centered) {
        if (abs(g[a]) > (m - 1) / 2) return false;
      } else if (g[a] < 0 || g[a] >= m) {
        return false;
      }
    }
    return true;
  }
  return position_[n][g[0].get_si()] >= 0;
}

bool QuotientTower::in_subgroup(const Element& g, std::size_t n) const {
  check_level(n);
  check_element(g);
  if (is_box()) {
    for (std::size_t a = 0; a < config_.dim; ++a) {
      if (!mpz_divisible_p(g[a].get_mpz_t(), mod_[n][a].get_mpz_t())) return false;
    }
    return true;
  }
  return coset_[n][g[0].get_si()] == coset_[n][identity_];
}

std::pair<Element, Element> QuotientTower::tile_decompose(const Element& g, std::size_t j, std::size_t i) const {
  check_level(j);
  if (i >= j) throw DepthExceeded("tile_decompose needs i < j");
  if (!in_domain(g, j)) throw NotInDomain(g.to_string() + " is not in D_" + std::to_string(j));
  Element u = reduce(g, i);
  Element v = mul(g, inv(u));
  return {std::move(v), std::move(u)};
}

std::uint64_t QuotientTower::enumerable_size(std::size_t n) const {
  const BigInt& s = domain_size(n);
  if (!fits_uint64(s) || s > (BigInt(1) << 62)) {
    throw BudgetExceeded("|D_" + std::to_string(n) + "| = " + s.get_str() + " cannot be enumerated");
  }
  return to_uint64(s);
}

Element QuotientTower::element_at(std::size_t n, std::uint64_t idx) const {
  check_level(n);
  if (!is_box()) {
    if (idx >= domain_[n].size()) throw NotInDomain("index past the end of D_" + std::to_string(n));
    return Element::scalar(BigInt(domain_[n][idx]));
  }
  if (BigInt(from_uint64(idx)) >= size_[n]) throw NotInDomain("index past the end of D_" + std::to_string(n));
  std::vector<BigInt> c(config_.dim);
  if (n < fast_depth_) {
    for (std::size_t a = 0; a < config_.dim; ++a) {
      const auto m = static_cast<std::uint64_t>(fast_mod_[n][a]);
      c[a] = from_int64(static_cast<std::int64_t>(idx % m) + fast_low(n, a));
      idx /= m;
    }
    return Element(std::move(c));
  }
  BigInt rest = from_uint64(idx);
  for (std::size_t a = 0; a < config_.dim; ++a) {
    BigInt digit;
    mpz_fdiv_qr(rest.get_mpz_t(), digit.get_mpz_t(), rest.get_mpz_t(), mod_[n][a].get_mpz_t());
    c[a] = digit + axis_low(n, a);
  }
  return Element(std::move(c));
}

std::uint64_t QuotientTower::index_of(const Element& d, std::size_t n) const {
  if (!in_domain(d, n)) throw NotInDomain(d.to_string() + " is not in D_" + std::to_string(n));
  if (!is_box()) return static_cast<std::uint64_t>(position_[n][d[0].get_si()]);
  BigInt idx = 0;
  BigInt stride = 1;
  for (std::size_t a = 0; a < config_.dim; ++a) {
    idx += (d[a] - axis_low(n, a)) * stride;
    stride *= mod_[n][a];
  }
  return to_uint64(idx);
}

std::vector<Element> QuotientTower::subgroup_domain(std::size_t i, std::size_t j) const {
  check_level(j);
  if (i > j) throw DepthExceeded("subgroup_domain needs i <= j");
  std::vector<Element> out;
  if (!is_box()) {
    for (int d : domain_[j]) {
      if (coset_[i][d] == coset_[i][identity_]) out.push_back(Element::scalar(BigInt(d)));
    }
    return out;
  }
  // per axis: multiples of N_i inside the D_j interval, ascending
  std::vector<std::vector<BigInt>> axis_values(config_.dim);
  BigInt total = 1;
  for (std::size_t a = 0; a < config_.dim; ++a) {
    const BigInt q = mod_[j][a] / mod_[i][a];
    BigInt first = 0;
    if (config_.style == DomainStyle::Centered) first = -((q - 1) / 2);
    for (BigInt k = 0; k < q; ++k) axis_values[a].push_back((first + k) * mod_[i][a]);
    total *= q;
  }
  const auto count = to_uint64(total);
  out.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::vector<BigInt> c(config_.dim);
    std::uint64_t rest = idx;
    for (std::size_t a = 0; a < config_.dim; ++a) {
      const std::uint64_t q = axis_values[a].size();
      c[a] = axis_values[a][rest % q];
      rest /= q;
    }
    out.emplace_back(std::move(c));
  }
  return out;
}

bool QuotientTower::fast_ok(std::size_t n) const { return is_box() && n < fast_depth_; }

int QuotientTower::table_coset(int g, std::size_t n) const { return coset_[n][g]; }

TowerPtr build_tower(const TowerConfig& config) { return std::make_shared<const QuotientTower>(config); }

namespace {

using Clock = std::chrono::steady_clock;

// Exhaustive decom checks for a table tower (domains are explicit lists there,
// so every property is checked literally).
void validate_table(const QuotientTower& t, std::size_t max_level, CheckResult& r) {
  const GroupTable& tab = *t.table();
  const int e = static_cast<int>(t.identity()[0].get_si());
  const std::size_t top = std::min(max_level, t.depth());
  for (std::size_t n = 1; n <= top && !r.failed(); ++n) {
    const auto& dom = tab.levels[n - 1].domain;
    if (std::find(dom.begin(), dom.end(), e) == dom.end()) {
      r.fail("identity missing from D_" + std::to_string(n));
      return;
    }
    std::set<int> seen;
    for (int d : dom) {
      const int c = tab.levels[n - 1].coset[d];
      if (!seen.insert(c).second) {
        r.fail("D_" + std::to_string(n) + " has two elements in the coset of " + std::to_string(d));
        return;
      }
    }
    if (BigInt(static_cast<long>(seen.size())) != t.domain_size(n)) {
      // find a coset without representative as the witness
      for (int g = 0; g < static_cast<int>(tab.mul.size()); ++g) {
        if (!seen.count(tab.levels[n - 1].coset[g])) {
          r.fail("coset " + std::to_string(g) + "*Gamma_" + std::to_string(n) + " has no representative in D_" +
                 std::to_string(n));
          return;
        }
      }
    }
    if (n >= 2) {
      const auto& prev = tab.levels[n - 2].domain;
      for (int d : prev) {
        if (std::find(dom.begin(), dom.end(), d) == dom.end()) {
          r.fail("D_" + std::to_string(n - 1) + " element " + std::to_string(d) + " missing from D_" + std::to_string(n));
          return;
        }
      }
    }
  }
  for (std::size_t j = 1; j <= top && !r.failed(); ++j) {
    for (std::size_t i = 0; i < j && !r.failed(); ++i) {
      std::set<int> image;
      std::size_t pairs = 0;
      const auto& dj = tab.levels[j - 1].domain;
      std::vector<int> di = i == 0 ? std::vector<int>{e} : tab.levels[i - 1].domain;
      std::set<int> dj_set(dj.begin(), dj.end());
      for (int v : dj) {
        const bool in_gamma_i = i == 0 || tab.levels[i - 1].coset[v] == tab.levels[i - 1].coset[e];
        if (!in_gamma_i) continue;
        for (int u : di) {
          ++pairs;
          const int p = tab.mul[v][u];
          if (!dj_set.count(p)) {
            r.fail("tiling leaves D_" + std::to_string(j) + ": " + std::to_string(v) + "*" + std::to_string(u));
            return;
          }
          image.insert(p);
        }
      }
      if (image.size() != dj.size() || pairs != dj.size()) {
        r.fail("(D_" + std::to_string(j) + " cap Gamma_" + std::to_string(i) + ") x D_" + std::to_string(i) +
               " is not a bijection onto D_" + std::to_string(j));
      }
    }
  }
}

}  // namespace

CheckResult validate_tower(const QuotientTower& t, std::size_t max_level, const Budget& budget) {
  CheckResult r;
  r.name = "decom";
  const auto start = Clock::now();
  const std::size_t top = std::min(max_level, t.depth());
  if (!t.is_box()) {
    validate_table(t, top, r);
    r.scope = "exhaustive over listed domains, levels 1.." + std::to_string(top);
    r.millis = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return r;
  }
  std::size_t exhaustive_top = 0;
  for (std::size_t n = 1; n <= top && !r.failed(); ++n) {
    if (t.domain_size(n) <= t.domain_size(n - 1)) {
      r.fail("|D_" + std::to_string(n) + "| does not grow");
      break;
    }
    const bool enumerate = fits_uint64(t.domain_size(n)) && t.domain_size(n) <= BigInt(from_uint64(budget.enumeration));
    if (!enumerate) {
      // interval inclusion per axis: D_{n-1} inside D_n, identity inside D_n
      for (std::size_t a = 0; a < t.dim(); ++a) {
        if (t.axis_modulus(n - 1, a) > t.axis_modulus(n, a)) r.fail("axis interval shrinks at level " + std::to_string(n));
      }
      if (!t.in_domain(t.identity(), n)) r.fail("identity missing from D_" + std::to_string(n));
      continue;
    }
    exhaustive_top = n;
    const std::uint64_t size = t.enumerable_size(n);
    std::unordered_set<Element, ElementHash> reps;
    for (std::uint64_t idx = 0; idx < size && !r.failed(); ++idx) {
      Element d = t.element_at(n, idx);
      Element red = t.reduce(d, n);
      if (red != d) r.fail("reduce is not the identity on D_" + std::to_string(n) + " at " + d.to_string());
      if (!reps.insert(red).second) r.fail("two elements of D_" + std::to_string(n) + " share a coset: " + d.to_string());
    }
    if (r.failed()) break;
    if (!t.in_domain(t.identity(), n)) {
      r.fail("identity missing from D_" + std::to_string(n));
      break;
    }
    const std::uint64_t prev = t.enumerable_size(n - 1);
    for (std::uint64_t idx = 0; idx < prev && !r.failed(); ++idx) {
      Element d = t.element_at(n - 1, idx);
      if (!t.in_domain(d, n)) r.fail("D_" + std::to_string(n - 1) + " element " + d.to_string() + " not in D_" + std::to_string(n));
    }
    // tiling of D_n by Gamma_i translates of D_i for every i < n
    for (std::size_t i = 0; i < n && !r.failed(); ++i) {
      std::vector<Element> vs = t.subgroup_domain(i, n);
      const std::uint64_t di = t.enumerable_size(i);
      if (BigInt(from_uint64(vs.size())) * t.domain_size(i) != t.domain_size(n)) {
        r.fail("|D_" + std::to_string(n) + "| != |D_" + std::to_string(n) + " cap Gamma_" + std::to_string(i) + "| * |D_" +
               std::to_string(i) + "|");
        break;
      }
      std::unordered_set<Element, ElementHash> image;
      for (const Element& v : vs) {
        for (std::uint64_t k = 0; k < di && !r.failed(); ++k) {
          Element p = t.mul(v, t.element_at(i, k));
          if (!t.in_domain(p, n)) {
            r.fail("tile " + v.to_string() + "*D_" + std::to_string(i) + " leaves D_" + std::to_string(n) + " at " + p.to_string());
          } else if (!image.insert(p).second) {
            r.fail("tiles of D_" + std::to_string(n) + " overlap at " + p.to_string());
          }
        }
      }
    }
  }
  r.scope = "exhaustive for levels 1.." + std::to_string(exhaustive_top) +
            (exhaustive_top < top ? ", interval inclusion for levels " + std::to_string(exhaustive_top + 1) + ".." + std::to_string(top) : "");
  r.millis = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return r;
}

}  // namespace toeplitz
