#include "toeplitz/measures.hpp"

#include <algorithm>

#include "fastbox.hpp"
#include "toeplitz/errors.hpp"

namespace toeplitz {

std::size_t subsequence_M(const ToeplitzSkeleton& skel, std::size_t k) {
  if (!skel.block_completed(k)) {
    throw DepthExceeded("block " + std::to_string(k) + " is not completed at depth " + std::to_string(skel.depth()));
  }
  return static_cast<std::size_t>(skel.m_k()[k].get_ui()) - 1;
}

std::vector<std::size_t> subsequence_within_tower(const ToeplitzSkeleton& skel) {
  std::vector<std::size_t> out;
  const BigInt top = static_cast<unsigned long>(skel.tower().depth());
  for (const BigInt& mk : skel.m_k()) {
    if (mk - 1 > top) break;
    out.push_back(static_cast<std::size_t>(mk.get_ui()) - 1);
  }
  return out;
}

Pattern parse_pattern(const nlohmann::json& j) {
  try {
    Pattern p;
    for (const auto& s : j.at("support")) {
      p.support.push_back(parse_element(s.is_string() ? s.get<std::string>() : s.dump()));
    }
    for (const auto& v : j.at("values")) {
      const int x = v.get<int>();
      if (x != 0 && x != 1) throw ConfigError("pattern values must be 0 or 1");
      p.values.push_back(x);
    }
    if (p.support.empty() || p.support.size() != p.values.size()) {
      throw ConfigError("pattern needs a nonempty support and one value per support element");
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed pattern: ") + e.what());
  }
}

PeriodicMeasure::PeriodicMeasure(SkeletonPtr skel, std::size_t n, const Budget& budget)
    : skel_(std::move(skel)), level_(n), window_(materialize_window(*skel_, n, budget)) {
  if (!window_.complete()) {
    throw DepthExceeded("eta_" + std::to_string(n) + " needs skeleton depth > " + std::to_string(n));
  }
}

int PeriodicMeasure::value(const Element& g) const {
  const QuotientTower& t = skel_->tower();
  return window_.bit(t.index_of(t.reduce(g, level_), level_));
}

Rational mu_cylinder(const PeriodicMeasure& mu, const Pattern& p, const Budget& budget) {
  const QuotientTower& t = mu.tower();
  const std::size_t n = mu.level();
  for (const auto& s : p.support) t.check_element(s);
  if (t.enumerable_size(n) > budget.enumeration) throw BudgetExceeded("|D_n| exceeds the enumeration budget");
  const std::uint64_t size = t.enumerable_size(n);
  std::uint64_t hits = 0;
  bool fast = t.fast_ok(n);
  for (const auto& s : p.support) {
    for (const auto& c : s.coords()) fast = fast && fits_int64(c) && abs(c) < BigInt(1) << 60;
  }
  if (fast) {
    detail::FastBox fb{t};
    const std::size_t dim = t.dim();
    std::vector<std::vector<std::int64_t>> sup;
    for (const auto& s : p.support) sup.push_back(fb.from(s));
    std::vector<std::int64_t> d(dim), x(dim), r(dim);
    for (std::uint64_t idx = 0; idx < size; ++idx) {
      fb.coords(n, idx, d.data());
      bool ok = true;
      for (std::size_t i = 0; i < sup.size() && ok; ++i) {
        for (std::size_t a = 0; a < dim; ++a) x[a] = d[a] + sup[i][a];
        fb.reduce(x.data(), n, r.data());
        ok = mu.window().bit(fb.index(r.data(), n)) == p.values[i];
      }
      if (ok) ++hits;
    }
  } else {
    for (std::uint64_t idx = 0; idx < size; ++idx) {
      const Element d = t.element_at(n, idx);
      bool ok = true;
      for (std::size_t i = 0; i < p.support.size() && ok; ++i) ok = mu.value(t.mul(d, p.support[i])) == p.values[i];
      if (ok) ++hits;
    }
  }
  return make_rational(from_uint64(hits), from_uint64(size));
}

ACounts a_counts(const ToeplitzSkeleton& skel, std::size_t n) {
  const QuotientTower& t = skel.tower();
  if (n > skel.depth()) throw DepthExceeded("a_counts at level " + std::to_string(n) + " needs that many steps");
  ACounts c;
  c.a0 = 0;
  c.a1 = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    const BigInt& q = t.level_index(i);
    const int planted = skel.planted(i) ? 1 : 0;
    c.a1 = c.a1 * q + planted;
    c.a0 = c.a0 * q + j_size(t, i - 1) - planted;
  }
  c.j_size = j_size(t, n);
  c.domain = t.domain_size(n);
  return c;
}

std::optional<ACounts> a_counts_enumerated(const ToeplitzSkeleton& skel, std::size_t n, const Budget& budget) {
  const QuotientTower& t = skel.tower();
  if (n > skel.depth() || t.enumerable_size(n) > budget.enumeration) return std::nullopt;
  ACounts c;
  c.a0 = static_cast<unsigned long>(per_set(skel, n, 0, budget).size());
  c.a1 = static_cast<unsigned long>(per_set(skel, n, 1, budget).size());
  c.j_size = static_cast<unsigned long>(j_set(t, n, budget).elements.size());
  c.domain = t.domain_size(n);
  return c;
}

Limit01 limit_01(const ToeplitzSkeleton& skel, const DensityReport& density) {
  if (density.verdict == Verdict::Inconclusive) throw InconclusiveTail(density.explanation);
  Limit01 out;
  out.level = skel.depth();
  const ACounts c = a_counts(skel, out.level);
  const Rational inv = make_rational(1, c.domain);
  const Rational f1 = make_rational(c.a1, c.domain);
  const Rational f0 = make_rational(c.a0, c.domain);
  out.one = Interval{f1, std::min(Rational(1), Rational(f1 + inv))};
  const Rational lo0 = std::max(Rational(1 - density.d_interval.hi + f0), Rational(1 - out.one.hi));
  out.zero = Interval{std::max(Rational(0), lo0), Rational(1 - f1)};
  return out;
}

CheckResult an_det_from_counts(std::size_t n, const ACounts& c) {
  CheckResult res;
  res.name = "an-det";
  const BigInt a00 = c.a0 + c.j_size;
  const BigInt a01 = c.a0 + c.j_size - 1;
  const BigInt a10 = c.a1;
  const BigInt a11 = c.a1 + 1;
  const BigInt det = a00 * a11 - a01 * a10;
  const std::string mat = "A_" + std::to_string(n) + " = [[" + a00.get_str() + "," + a01.get_str() + "],[" +
                          a10.get_str() + "," + a11.get_str() + "]]";
  res.witnesses.push_back(mat + ", det = " + det.get_str());
  if (det != c.domain) res.fail(mat + " has det " + det.get_str() + " != |D_n| = " + c.domain.get_str());
  res.scope = "n=" + std::to_string(n);
  return res;
}

CheckResult an_det_check(const ToeplitzSkeleton& skel, std::size_t n) { return an_det_from_counts(n, a_counts(skel, n)); }

OrbitOracle::OrbitOracle(SkeletonPtr skel, Budget budget) : skel_(std::move(skel)), budget_(budget) {}

const std::pair<CosetSet, CosetSet>& OrbitOracle::per(std::size_t n) const {
  auto it = per_.find(n);
  if (it == per_.end()) {
    it = per_.emplace(n, std::make_pair(per_set(*skel_, n, 0, budget_), per_set(*skel_, n, 1, budget_))).first;
  }
  return it->second;
}

const JSet& OrbitOracle::j(std::size_t n) const {
  auto it = j_.find(n);
  if (it == j_.end()) it = j_.emplace(n, j_set(skel_->tower(), n, budget_)).first;
  return it->second;
}

std::optional<bool> OrbitOracle::in_Cn(const Element& v, std::size_t n) const {
  const QuotientTower& t = skel_->tower();
  const auto& p = per(n);
  const Element vinv = t.inv(v);
  return coset_translate(t, p.first, vinv) == p.first && coset_translate(t, p.second, vinv) == p.second;
}

std::optional<bool> OrbitOracle::in_Cn0(const Element& v, std::size_t n) const {
  if (!*in_Cn(v, n)) return false;
  const QuotientTower& t = skel_->tower();
  bool undetermined = false;
  for (const Element& g : j(n).elements) {
    auto x = skel_->eval(t.mul(v, g));
    if (!x) {
      undetermined = true;
    } else if (*x == 1) {
      return false;
    }
  }
  if (undetermined) return std::nullopt;
  return true;
}

std::optional<bool> OrbitOracle::in_Cng(const Element& v, std::size_t n, const Element& g) const {
  const QuotientTower& t = skel_->tower();
  const auto& jn = j(n).elements;
  if (std::find(jn.begin(), jn.end(), g) == jn.end()) throw ConfigError(g.to_string() + " is not in J(" + std::to_string(n) + ")");
  if (!*in_Cn(v, n)) return false;
  auto x = skel_->eval(t.mul(v, g));
  if (!x) return std::nullopt;
  return *x == 1;
}

std::optional<bool> OrbitOracle::in_Cn1(const Element& v, std::size_t n) const {
  if (!*in_Cn(v, n)) return false;
  const QuotientTower& t = skel_->tower();
  bool undetermined = false;
  for (const Element& g : j(n).elements) {
    auto x = skel_->eval(t.mul(v, g));
    if (!x) {
      undetermined = true;
    } else if (*x == 1) {
      return true;
    }
  }
  if (undetermined) return std::nullopt;
  return false;
}

std::optional<bool> OrbitOracle::in_Zn(const Element& v, std::size_t n) const {
  const QuotientTower& t = skel_->tower();
  const Element u = t.reduce(v, n);
  return in_Cn0(t.mul(v, t.inv(u)), n);
}

std::optional<bool> OrbitOracle::in_Wn(const Element& v, std::size_t n) const {
  if (n == 0) throw ConfigError("W_n is defined for n >= 1");
  const QuotientTower& t = skel_->tower();
  const Element w = t.reduce(v, n);
  const Element shift = t.mul(v, t.inv(w));
  bool undetermined = false;
  std::optional<Element> one;
  for (const Element& g : j(n).elements) {
    auto x = skel_->eval(t.mul(shift, g));
    if (!x) {
      undetermined = true;
    } else if (*x == 1) {
      one = g;
      break;
    }
  }
  if (!one) {
    if (undetermined) return std::nullopt;
    return false;
  }
  const Element gamma = t.tile_decompose(w, n, n - 1).first;
  const Element gamma_tilde = t.tile_decompose(*one, n, n - 1).first;
  return !t.is_identity(gamma) && gamma != gamma_tilde;
}

std::optional<bool> OrbitOracle::in_Un(const Element& v, std::size_t n) const {
  const QuotientTower& t = skel_->tower();
  if (n + 1 > skel_->depth()) return std::nullopt;
  auto it = eta_n_.find(n);
  if (it == eta_n_.end()) {
    std::vector<int> vals;
    const std::uint64_t size = t.enumerable_size(n + 1);
    if (size > budget_.enumeration) throw BudgetExceeded("|D_{n+1}| exceeds the enumeration budget");
    for (std::uint64_t idx = 0; idx < size; ++idx) vals.push_back(*skel_->eval(t.reduce(t.element_at(n + 1, idx), n)));
    it = eta_n_.emplace(n, std::move(vals)).first;
  }
  bool undetermined = false;
  for (std::uint64_t idx = 0; idx < it->second.size(); ++idx) {
    auto x = skel_->eval(t.mul(v, t.element_at(n + 1, idx)));
    if (!x) {
      undetermined = true;
    } else if (*x != it->second[idx]) {
      return false;
    }
  }
  if (undetermined) return std::nullopt;
  return true;
}

std::optional<bool> OrbitOracle::in_Yn(const Element& v, std::size_t n) const {
  const QuotientTower& t = skel_->tower();
  bool undetermined = false;
  for (const Element& gamma : t.subgroup_domain(n, n + 1)) {
    auto r = in_Cn0(t.mul(v, gamma), n);
    if (!r) {
      undetermined = true;
    } else if (!*r) {
      return false;
    }
  }
  if (undetermined) return std::nullopt;
  return true;
}

std::optional<bool> OrbitOracle::member(const Element& v, const SetId& id, std::size_t n) const {
  skel_->tower().check_element(v);
  switch (id.kind) {
    case SetKind::Cn:
      return in_Cn(v, n);
    case SetKind::Cn0:
      return in_Cn0(v, n);
    case SetKind::Cn1:
      return in_Cn1(v, n);
    case SetKind::Cng:
      if (!id.g) throw ConfigError("Cng needs an element g");
      return in_Cng(v, n, *id.g);
    case SetKind::Zn:
      return in_Zn(v, n);
    case SetKind::Wn:
      return in_Wn(v, n);
    case SetKind::Un:
      return in_Un(v, n);
    case SetKind::Yn:
      return in_Yn(v, n);
    case SetKind::Cyl0:
    case SetKind::Cyl1: {
      auto x = skel_->eval(v);
      if (!x) return std::nullopt;
      return *x == (id.kind == SetKind::Cyl1 ? 1 : 0);
    }
  }
  return std::nullopt;
}

bool orbit_member(const OrbitOracle& oracle, const Element& v, const SetId& id, std::size_t n) {
  auto r = oracle.member(v, id, n);
  if (!r) {
    throw DepthExceeded("membership of sigma^{v^-1} eta in " + set_id_name(id) + " at level " + std::to_string(n) +
                        " is not determined at depth " + std::to_string(oracle.skeleton().depth()));
  }
  return *r;
}

Rational mu_U(const PeriodicMeasure& mu_m, const ToeplitzSkeleton& skel, std::size_t n, const Budget& budget) {
  const QuotientTower& t = skel.tower();
  const std::size_t m = mu_m.level();
  if (n + 1 > skel.depth()) throw DepthExceeded("eta_n on D_{n+1} needs depth > n");
  const std::uint64_t wsize = t.enumerable_size(n + 1);
  const std::uint64_t dsize = t.enumerable_size(m);
  if (wsize > budget.enumeration || dsize > budget.enumeration) throw BudgetExceeded("mu_m(U_n) exceeds the enumeration budget");
  std::vector<int> target(wsize);
  for (std::uint64_t i = 0; i < wsize; ++i) target[i] = *skel.eval(t.reduce(t.element_at(n + 1, i), n));
  std::uint64_t hits = 0;
  if (t.fast_ok(std::max(m, n + 1))) {
    detail::FastBox fb{t};
    const std::size_t dim = t.dim();
    std::vector<std::vector<std::int64_t>> ws(wsize, std::vector<std::int64_t>(dim));
    for (std::uint64_t i = 0; i < wsize; ++i) fb.coords(n + 1, i, ws[i].data());
    std::vector<std::int64_t> d(dim), x(dim), r(dim);
    for (std::uint64_t idx = 0; idx < dsize; ++idx) {
      fb.coords(m, idx, d.data());
      bool ok = true;
      for (std::uint64_t i = 0; i < wsize && ok; ++i) {
        for (std::size_t a = 0; a < dim; ++a) x[a] = d[a] + ws[i][a];
        fb.reduce(x.data(), m, r.data());
        ok = mu_m.window().bit(fb.index(r.data(), m)) == target[i];
      }
      if (ok) ++hits;
    }
  } else {
    for (std::uint64_t idx = 0; idx < dsize; ++idx) {
      const Element d = t.element_at(m, idx);
      bool ok = true;
      for (std::uint64_t i = 0; i < wsize && ok; ++i) ok = mu_m.value(t.mul(d, t.element_at(n + 1, i))) == target[i];
      if (ok) ++hits;
    }
  }
  return make_rational(from_uint64(hits), from_uint64(dsize));
}

Rational uns_lower_bound(const QuotientTower& t, std::size_t n, std::size_t m) {
  if (m > t.depth() || m < n + 1) throw DepthExceeded("uns bound needs n < m <= tower depth");
  Rational b = make_rational(1, t.domain_size(n + 1));
  for (std::size_t l = 1; l + n + 1 <= m; ++l) b *= 1 - make_rational(t.domain_size(n + l), t.domain_size(n + l + 1));
  return b;
}

std::optional<Rational> z_measure_lower_bound(const QuotientTower& t, std::size_t n) {
  const TailSpec& tail = t.config().tail;
  if (tail.kind != TailSpec::Kind::Geometric || t.depth() < 2 || n + 1 > t.depth()) return std::nullopt;
  Rational p = 1;
  for (std::size_t j = n + 1; j + 1 <= t.depth(); ++j) p *= 1 - make_rational(t.domain_size(j), t.domain_size(j + 1));
  const std::size_t last = t.depth() - 1;
  const Rational beyond = make_rational(t.domain_size(last), t.domain_size(last + 1)) * tail.ratio / (1 - tail.ratio);
  if (beyond >= 1) return Rational(0);
  return p * (1 - beyond);
}

}  // namespace toeplitz
