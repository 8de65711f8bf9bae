#include "toeplitz/cells.hpp"

#include <algorithm>

#include "toeplitz/errors.hpp"
#include "toeplitz/measures.hpp"

namespace toeplitz {

SetId parse_set_id(const std::string& text) {
  SetId id;
  if (text == "Cn") {
    id.kind = SetKind::Cn;
  } else if (text == "Cn0") {
    id.kind = SetKind::Cn0;
  } else if (text == "Cn1") {
    id.kind = SetKind::Cn1;
  } else if (text.rfind("Cng:", 0) == 0) {
    id.kind = SetKind::Cng;
    id.g = parse_element(text.substr(4));
  } else if (text == "Zn") {
    id.kind = SetKind::Zn;
  } else if (text == "Wn") {
    id.kind = SetKind::Wn;
  } else if (text == "Un") {
    id.kind = SetKind::Un;
  } else if (text == "Yn") {
    id.kind = SetKind::Yn;
  } else if (text == "[0]") {
    id.kind = SetKind::Cyl0;
  } else if (text == "[1]") {
    id.kind = SetKind::Cyl1;
  } else {
    throw ConfigError("unknown set '" + text + "' (expected Cn, Cn0, Cn1, Cng:<g>, Zn, Wn, Un, Yn, [0], [1])");
  }
  return id;
}

std::string set_id_name(const SetId& id) {
  switch (id.kind) {
    case SetKind::Cn:
      return "Cn";
    case SetKind::Cn0:
      return "Cn0";
    case SetKind::Cn1:
      return "Cn1";
    case SetKind::Cng:
      return "Cng:" + (id.g ? id.g->to_string() : std::string("?"));
    case SetKind::Zn:
      return "Zn";
    case SetKind::Wn:
      return "Wn";
    case SetKind::Un:
      return "Un";
    case SetKind::Yn:
      return "Yn";
    case SetKind::Cyl0:
      return "[0]";
    case SetKind::Cyl1:
      return "[1]";
  }
  return "?";
}

std::uint64_t CellSet::count() const { return static_cast<std::uint64_t>(std::count(atoms.begin(), atoms.end(), true)); }

CellSet cell_union(const CellSet& a, const CellSet& b) {
  if (a.level != b.level || a.atoms.size() != b.atoms.size()) throw ConfigError("cell sets live at different levels");
  CellSet out = a;
  for (std::size_t i = 0; i < b.atoms.size(); ++i) {
    if (b.atoms[i]) out.atoms[i] = true;
  }
  return out;
}

bool cell_subset(const CellSet& a, const CellSet& b) {
  if (a.level != b.level || a.atoms.size() != b.atoms.size()) throw ConfigError("cell sets live at different levels");
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    if (a.atoms[i] && !b.atoms[i]) return false;
  }
  return true;
}

bool operator==(const CellSet& a, const CellSet& b) { return a.level == b.level && a.atoms == b.atoms; }

CellAlgebra::CellAlgebra(SkeletonPtr skel, Budget budget) : skel_(std::move(skel)), budget_(budget) {}

void CellAlgebra::require_level(std::size_t n) const {
  if (n > skel_->depth()) {
    throw DepthExceeded("cells at level " + std::to_string(n) + " need skeleton depth >= " + std::to_string(n));
  }
}

const JSet& CellAlgebra::j(std::size_t n) const {
  auto it = j_.find(n);
  if (it == j_.end()) {
    it = j_.emplace(n, j_set(tower(), n, budget_)).first;
    auto& pos = jpos_[n];
    for (std::uint32_t i = 0; i < it->second.elements.size(); ++i) pos.emplace(it->second.elements[i], i);
  }
  return it->second;
}

std::uint64_t CellAlgebra::atom_count(std::size_t n) const {
  require_level(n);
  const std::uint64_t size = tower().enumerable_size(n);
  const std::uint64_t t = tags(n);
  if (size > budget_.cells / t) {
    throw BudgetExceeded("level " + std::to_string(n) + " has more partition atoms than the cell budget");
  }
  return size * t;
}

std::string CellAlgebra::atom_name(std::size_t n, const Atom& a) const {
  const std::string v = tower().element_at(n, a.v).to_string();
  if (a.tag == 0) return "v=" + v + ":C0";
  return "v=" + v + ":C[" + j(n).elements[a.tag - 1].to_string() + "]";
}

std::optional<std::uint32_t> CellAlgebra::j_position(std::size_t n, const Element& g) const {
  j(n);
  const auto& pos = jpos_.at(n);
  auto it = pos.find(g);
  if (it == pos.end()) return std::nullopt;
  return it->second;
}

Atom CellAlgebra::parent(std::size_t n_plus_1, const Atom& a) const {
  if (n_plus_1 == 0) throw ConfigError("level 0 atoms have no parent");
  const QuotientTower& t = tower();
  const std::size_t n = n_plus_1 - 1;
  const Element w = t.element_at(n_plus_1, a.v);
  const auto [gamma, u] = t.tile_decompose(w, n_plus_1, n);
  Atom out{t.index_of(u, n), 0};
  if (t.is_identity(gamma)) {
    // C_{n+1} sits inside C_n with eta's values on J(n)
    if (const Element* h = skel_->planted(n_plus_1)) out.tag = 1 + *j_position(n, *h);
    return out;
  }
  if (a.tag == 0) return out;
  const Element& jn1 = j(n_plus_1).elements[a.tag - 1];
  const auto [gamma_tilde, g] = t.tile_decompose(jn1, n_plus_1, n);
  if (gamma_tilde == gamma) out.tag = 1 + *j_position(n, g);
  return out;
}

const std::vector<std::uint64_t>& CellAlgebra::parent_table(std::size_t n_plus_1) const {
  auto it = parents_.find(n_plus_1);
  if (it != parents_.end()) return it->second;
  const std::uint64_t count = atom_count(n_plus_1);
  atom_count(n_plus_1 - 1);
  std::vector<std::uint64_t> table(count);
  for (std::uint64_t c = 0; c < count; ++c) table[c] = code(n_plus_1 - 1, parent(n_plus_1, atom(n_plus_1, c)));
  return parents_.emplace(n_plus_1, std::move(table)).first->second;
}

CellSet CellAlgebra::empty(std::size_t n) const { return CellSet{n, std::vector<bool>(atom_count(n), false)}; }

CellSet CellAlgebra::expand(const CellSet& s, std::size_t m) const {
  if (m < s.level) throw ConfigError("cannot expand a cell set to a coarser level");
  CellSet cur = s;
  for (std::size_t l = s.level; l < m; ++l) {
    const auto& table = parent_table(l + 1);
    CellSet next = empty(l + 1);
    for (std::uint64_t c = 0; c < table.size(); ++c) next.atoms[c] = cur.atoms[table[c]];
    cur = std::move(next);
  }
  return cur;
}

CellSet CellAlgebra::decompose(const SetId& id, std::size_t n) const {
  const QuotientTower& t = tower();
  CellSet s = empty(n);
  const std::uint64_t id_idx = t.index_of(t.identity(), n);
  const std::uint64_t nt = tags(n);
  const std::uint64_t size = t.enumerable_size(n);
  switch (id.kind) {
    case SetKind::Cn:
      for (std::uint64_t tag = 0; tag < nt; ++tag) s.atoms[id_idx * nt + tag] = true;
      break;
    case SetKind::Cn0:
      s.atoms[id_idx * nt] = true;
      break;
    case SetKind::Cn1:
      for (std::uint64_t tag = 1; tag < nt; ++tag) s.atoms[id_idx * nt + tag] = true;
      break;
    case SetKind::Cng: {
      if (!id.g) throw ConfigError("Cng needs an element g");
      auto p = j_position(n, *id.g);
      if (!p) throw ConfigError(id.g->to_string() + " is not in J(" + std::to_string(n) + ")");
      s.atoms[id_idx * nt + 1 + *p] = true;
      break;
    }
    case SetKind::Zn:
      for (std::uint64_t v = 0; v < size; ++v) s.atoms[v * nt] = true;
      break;
    case SetKind::Wn: {
      if (n == 0) throw ConfigError("W_n is defined for n >= 1");
      const auto& jn = j(n).elements;
      for (std::uint64_t v = 0; v < size; ++v) {
        const Element gamma = t.tile_decompose(t.element_at(n, v), n, n - 1).first;
        if (t.is_identity(gamma)) continue;
        for (std::uint64_t k = 0; k < jn.size(); ++k) {
          const Element gamma_tilde = t.tile_decompose(jn[k], n, n - 1).first;
          if (gamma_tilde != gamma) s.atoms[v * nt + 1 + k] = true;
        }
      }
      break;
    }
    case SetKind::Cyl0:
    case SetKind::Cyl1: {
      if (!per_.count(n)) per_.emplace(n, std::make_pair(per_set(*skel_, n, 0, budget_), per_set(*skel_, n, 1, budget_)));
      const auto& per = per_.at(n);
      const int want = id.kind == SetKind::Cyl1 ? 1 : 0;
      for (std::uint64_t v : (want == 1 ? per.second : per.first).members) {
        for (std::uint64_t tag = 0; tag < nt; ++tag) s.atoms[v * nt + tag] = true;
      }
      const auto& jn = j(n).elements;
      for (std::uint64_t k = 0; k < jn.size(); ++k) {
        const std::uint64_t v = t.index_of(jn[k], n);
        for (std::uint64_t tag = 0; tag < nt; ++tag) {
          const int value = tag == 1 + k ? 1 : 0;
          if (value == want) s.atoms[v * nt + tag] = true;
        }
      }
      break;
    }
    case SetKind::Un:
    case SetKind::Yn:
      throw Unsupported(set_id_name(id) + " is not a finite union of partition atoms at level n");
  }
  return s;
}

CellSet CellAlgebra::shifted_ones(std::size_t n) const {
  const QuotientTower& t = tower();
  CellSet s = empty(n + 1);
  const std::uint64_t nt = tags(n + 1);
  const std::uint64_t size = t.enumerable_size(n);
  for (std::uint64_t i = 0; i < size; ++i) {
    const std::uint64_t v = t.index_of(t.element_at(n, i), n + 1);
    for (std::uint64_t tag = 1; tag < nt; ++tag) s.atoms[v * nt + tag] = true;
  }
  return s;
}

std::optional<Atom> CellAlgebra::orbit_label(const Element& v, std::size_t n) const {
  const QuotientTower& t = tower();
  require_level(n);
  const Element w = t.reduce(v, n);
  const Element shift = t.mul(v, t.inv(w));
  Atom a{t.index_of(w, n), 0};
  bool undetermined = false;
  const auto& jn = j(n).elements;
  for (std::uint32_t k = 0; k < jn.size(); ++k) {
    auto x = skel_->eval(t.mul(shift, jn[k]));
    if (!x) {
      undetermined = true;
    } else if (*x == 1) {
      a.tag = 1 + k;
      return a;
    }
  }
  if (undetermined) return std::nullopt;
  return a;
}

namespace {

// Levels whose atoms, parents and labels are all available.
std::size_t usable_top(const CellAlgebra& cells, std::size_t max_level) {
  return std::min(max_level, cells.skeleton().depth());
}

void check_label_consistency(const CellAlgebra& cells, std::size_t top, std::size_t label_level, CheckResult& res) {
  const QuotientTower& t = cells.tower();
  const std::size_t lv = std::min(label_level, cells.skeleton().depth());
  const std::uint64_t size = t.enumerable_size(lv);
  std::uint64_t compared = 0, undetermined = 0;
  for (std::uint64_t idx = 0; idx < size && !res.failed(); ++idx) {
    const Element v = t.element_at(lv, idx);
    for (std::size_t n = 1; n < top && !res.failed(); ++n) {
      auto lo = cells.orbit_label(v, n);
      auto hi = cells.orbit_label(v, n + 1);
      if (!lo || !hi) {
        ++undetermined;
        continue;
      }
      ++compared;
      const Atom p = cells.parent(n + 1, *hi);
      if (!(p == *lo)) {
        res.fail("orbit point v=" + v.to_string() + ": level " + std::to_string(n + 1) + " atom " +
                 cells.atom_name(n + 1, *hi) + " refines to " + cells.atom_name(n, p) + " but eta gives " +
                 cells.atom_name(n, *lo));
      }
    }
  }
  res.witnesses.push_back(std::to_string(compared) + " orbit labels refined consistently, " +
                          std::to_string(undetermined) + " beyond the constructed depth");
}

}  // namespace

CheckResult containings_check(const CellAlgebra& cells, std::size_t max_level, std::size_t label_level) {
  CheckResult res;
  res.name = "containings";
  const QuotientTower& t = cells.tower();
  const ToeplitzSkeleton& skel = cells.skeleton();
  const std::size_t top = usable_top(cells, max_level);
  if (top < 2) {
    res.vacate("needs depth >= 2 for a level-1 refinement");
    return res;
  }
  std::uint64_t relations = 0;
  for (std::size_t n = 1; n < top && !res.failed(); ++n) {
    const std::size_t n1 = n + 1;
    const std::uint64_t nt1 = cells.tags(n1);
    const CellSet c0 = cells.expand(cells.decompose(SetId{SetKind::Cn0, std::nullopt}, n), n1);
    const auto& jn = cells.j(n).elements;
    std::vector<CellSet> cg;
    for (const auto& g : jn) cg.push_back(cells.expand(cells.decompose(SetId{SetKind::Cng, g}, n), n1));
    const auto gammas = t.subgroup_domain(n, n1);
    auto report = [&](int which, const std::string& what) {
      res.fail("(" + std::to_string(which) + ") fails at n=" + std::to_string(n) + ": " + what);
    };
    for (const Element& gamma : gammas) {
      if (t.is_identity(gamma)) continue;
      const std::uint64_t gi = t.index_of(gamma, n1);
      ++relations;
      if (!c0.contains(gi * nt1)) report(1, "sigma^{gamma^-1} C_{n+1}^0 for gamma=" + gamma.to_string());
      for (std::size_t k = 0; k < jn.size(); ++k) {
        for (const Element& gamma_tilde : gammas) {
          if (t.is_identity(gamma_tilde)) continue;
          const Element target = t.mul(gamma_tilde, jn[k]);
          auto p = cells.j_position(n1, target);
          if (!p) {
            report(2, gamma_tilde.to_string() + "*" + jn[k].to_string() + " is not in J(n+1)");
            continue;
          }
          const std::uint64_t c = gi * nt1 + 1 + *p;
          ++relations;
          if (gamma_tilde == gamma) {
            if (!cg[k].contains(c)) report(2, "gamma=" + gamma.to_string() + ", g=" + jn[k].to_string());
          } else if (!c0.contains(c)) {
            report(3, "gamma=" + gamma.to_string() + ", gamma~=" + gamma_tilde.to_string() + ", g=" + jn[k].to_string());
          }
        }
      }
    }
    const CellSet cn1 = cells.decompose(SetId{SetKind::Cn, std::nullopt}, n1);
    ++relations;
    if (skel.in_subsequence(n)) {
      if (!cell_subset(cn1, c0)) report(4, "C_{n+1} is not inside C_n^0");
    } else {
      const Element* h = skel.planted(n1);
      if (!h) {
        report(5, "no element planted at step " + std::to_string(n1));
      } else {
        const auto p = cells.j_position(n, *h);
        if (!p || !cell_subset(cn1, cg[*p])) report(5, "C_{n+1} is not inside C_{n," + h->to_string() + "}");
      }
    }
  }
  res.witnesses.push_back(std::to_string(relations) + " atom relations for 1 <= n < " + std::to_string(top));
  if (!res.failed()) check_label_consistency(cells, top, label_level, res);
  res.scope = "n in [1," + std::to_string(top - 1) + "], labels over D_" + std::to_string(std::min(label_level, skel.depth()));
  return res;
}

CheckResult z_identity_check(const CellAlgebra& cells, std::size_t max_level) {
  CheckResult res;
  res.name = "z-identity";
  const ToeplitzSkeleton& skel = cells.skeleton();
  const std::size_t top = usable_top(cells, max_level);
  if (top < 2) {
    res.vacate("needs depth >= 2");
    return res;
  }
  const SetId z{SetKind::Zn, std::nullopt};
  const SetId w{SetKind::Wn, std::nullopt};
  std::vector<std::size_t> ms;
  for (std::size_t n = 1; n < top && !res.failed(); ++n) {
    const CellSet lhs = cells.expand(cells.decompose(z, n), n + 1);
    const CellSet zw = cell_union(cells.decompose(z, n + 1), cells.decompose(w, n + 1));
    if (skel.in_subsequence(n)) {
      ms.push_back(n);
      const CellSet rhs = cell_union(zw, cells.shifted_ones(n));
      if (!(lhs == rhs)) {
        res.fail("Z_" + std::to_string(n) + " differs from Z_{n+1} u W_{n+1} u shifted C^1_{n+1} (" +
                 std::to_string(lhs.count()) + " vs " + std::to_string(rhs.count()) + " atoms at level " +
                 std::to_string(n + 1) + ")");
      } else {
        res.witnesses.push_back("equality at n=" + std::to_string(n) + " over " + std::to_string(lhs.count()) + " atoms");
      }
    } else if (!cell_subset(lhs, zw)) {
      res.fail("Z_" + std::to_string(n) + " is not inside Z_{n+1} u W_{n+1}");
    }
  }
  if (skel.in_subsequence(top)) ms.push_back(top);
  // chained inclusion between subsequence levels
  for (std::size_t a = 0; a < ms.size() && !res.failed(); ++a) {
    for (std::size_t b = a + 1; b < ms.size() && !res.failed(); ++b) {
      const std::size_t nj = ms[a], ns = ms[b];
      const CellSet lhs = cells.expand(cells.decompose(z, nj), ns);
      CellSet rhs = cells.decompose(z, ns);
      for (std::size_t r = nj + 1; r <= ns; ++r) rhs = cell_union(rhs, cells.expand(cells.decompose(w, r), ns));
      for (std::size_t m : ms) {
        if (m >= nj && m < ns) rhs = cell_union(rhs, cells.expand(cells.shifted_ones(m), ns));
      }
      if (!cell_subset(lhs, rhs)) {
        res.fail("chained inclusion fails between subsequence levels " + std::to_string(nj) + " and " + std::to_string(ns));
      } else {
        res.witnesses.push_back("chained inclusion " + std::to_string(nj) + " -> " + std::to_string(ns));
      }
    }
  }
  res.scope = "n in [1," + std::to_string(top - 1) + "], subsequence levels within depth: " + std::to_string(ms.size());
  return res;
}

CheckResult at_least_check(const CellAlgebra& cells, std::size_t max_level, std::size_t label_level) {
  CheckResult res;
  res.name = "at-least";
  const QuotientTower& t = cells.tower();
  const ToeplitzSkeleton& skel = cells.skeleton();
  const std::size_t top = usable_top(cells, max_level);
  if (top < 1) {
    res.vacate("needs depth >= 1");
    return res;
  }
  const SetId c0{SetKind::Cyl0, std::nullopt};
  const SetId c1{SetKind::Cyl1, std::nullopt};
  for (std::size_t n = 1; n <= top && !res.failed(); ++n) {
    const CellSet s0 = cells.decompose(c0, n);
    const CellSet s1 = cells.decompose(c1, n);
    for (std::size_t i = 0; i < s0.atoms.size(); ++i) {
      if (s0.atoms[i] == s1.atoms[i]) {
        res.fail("atom " + cells.atom_name(n, cells.atom(n, i)) + " is " + (s0.atoms[i] ? "in both" : "in neither") +
                 " of [0], [1] at level " + std::to_string(n));
        break;
      }
    }
    if (res.failed()) break;
    if (n < top) {
      if (!(cells.expand(s0, n + 1) == cells.decompose(c0, n + 1)) || !(cells.expand(s1, n + 1) == cells.decompose(c1, n + 1))) {
        res.fail("cylinder decomposition at level " + std::to_string(n) + " does not refine to level " + std::to_string(n + 1));
        break;
      }
    }
    // coefficients of C_n^0 and of each C_{n,h} in [0] and [1]
    const std::uint64_t nt = cells.tags(n);
    std::vector<std::vector<BigInt>> coef(2, std::vector<BigInt>(nt, 0));
    for (std::size_t i = 0; i < s0.atoms.size(); ++i) {
      const Atom a = cells.atom(n, i);
      coef[s1.atoms[i] ? 1 : 0][a.tag] += 1;
    }
    for (int r = 0; r < 2; ++r) {
      for (std::uint64_t tag = 2; tag < nt; ++tag) {
        if (coef[r][tag] != coef[r][1]) res.fail("[" + std::to_string(r) + "] uses the C_{n,h} unevenly at level " + std::to_string(n));
      }
    }
    if (res.failed()) break;
    const ACounts ac = a_counts(skel, n);
    const BigInt expect[2][2] = {{ac.a0 + ac.j_size, ac.a0 + ac.j_size - 1}, {ac.a1, ac.a1 + 1}};
    for (int r = 0; r < 2; ++r) {
      const BigInt got1 = nt > 1 ? coef[r][1] : expect[r][1];
      if (coef[r][0] != expect[r][0] || got1 != expect[r][1]) {
        res.fail("coefficient row " + std::to_string(r) + " at level " + std::to_string(n) + " is (" + coef[r][0].get_str() +
                 "," + got1.get_str() + "), A_n gives (" + expect[r][0].get_str() + "," + expect[r][1].get_str() + ")");
      }
    }
    if (!res.failed()) {
      res.witnesses.push_back("A_" + std::to_string(n) + " = [[" + expect[0][0].get_str() + "," + expect[0][1].get_str() +
                              "],[" + expect[1][0].get_str() + "," + expect[1][1].get_str() + "]]");
    }
  }
  if (!res.failed()) {
    const std::size_t lv = std::min(label_level, skel.depth());
    const std::uint64_t size = t.enumerable_size(lv);
    std::uint64_t checked = 0;
    for (std::size_t n = 1; n <= top && !res.failed(); ++n) {
      const CellSet s1 = cells.decompose(c1, n);
      for (std::uint64_t idx = 0; idx < size && !res.failed(); ++idx) {
        const Element v = t.element_at(lv, idx);
        auto label = cells.orbit_label(v, n);
        auto value = skel.eval(v);
        if (!label || !value) continue;
        ++checked;
        if (s1.contains(cells.code(n, *label)) != (*value == 1)) {
          res.fail("orbit point v=" + v.to_string() + " has eta(v)=" + std::to_string(*value) + " but its level " +
                   std::to_string(n) + " atom lies in the other cylinder");
        }
      }
    }
    res.witnesses.push_back(std::to_string(checked) + " orbit labels agree with eta(v)");
  }
  res.scope = "n in [1," + std::to_string(top) + "]";
  return res;
}

}  // namespace toeplitz
