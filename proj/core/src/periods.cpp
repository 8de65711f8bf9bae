#include "toeplitz/periods.hpp"

#include <algorithm>
#include <iterator>
#include <random>
#include <unordered_set>

#include "toeplitz/errors.hpp"

namespace toeplitz {

bool CosetSet::contains(std::uint64_t idx) const { return std::binary_search(members.begin(), members.end(), idx); }

namespace {

void require_same_level(const CosetSet& a, const CosetSet& b) {
  if (a.level != b.level) throw Inconsistency("coset sets at different levels");
}

void require_enumerable(const QuotientTower& t, std::size_t n, const Budget& budget) {
  if (t.enumerable_size(n) > budget.enumeration) {
    throw BudgetExceeded("|D_" + std::to_string(n) + "| exceeds the enumeration budget");
  }
}

std::string coset_name(const QuotientTower& t, std::size_t n, std::uint64_t idx) {
  return t.element_at(n, idx).to_string() + "*Gamma_" + std::to_string(n);
}

}  // namespace

CosetSet coset_union(const CosetSet& a, const CosetSet& b) {
  require_same_level(a, b);
  CosetSet r{a.level, {}};
  std::set_union(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(), std::back_inserter(r.members));
  return r;
}

CosetSet coset_intersection(const CosetSet& a, const CosetSet& b) {
  require_same_level(a, b);
  CosetSet r{a.level, {}};
  std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                        std::back_inserter(r.members));
  return r;
}

CosetSet coset_difference(const CosetSet& a, const CosetSet& b) {
  require_same_level(a, b);
  CosetSet r{a.level, {}};
  std::set_difference(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                      std::back_inserter(r.members));
  return r;
}

CosetSet coset_translate(const QuotientTower& t, const CosetSet& s, const Element& g) {
  CosetSet r{s.level, {}};
  r.members.reserve(s.members.size());
  for (std::uint64_t idx : s.members) {
    r.members.push_back(t.index_of(t.reduce(t.mul(g, t.element_at(s.level, idx)), s.level), s.level));
  }
  std::sort(r.members.begin(), r.members.end());
  return r;
}

CosetSet coset_lift(const QuotientTower& t, const CosetSet& s, std::size_t m, const Budget& budget) {
  if (m < s.level) throw DepthExceeded("cannot lift a coset set to a coarser level");
  require_enumerable(t, m, budget);
  CosetSet r{m, {}};
  const std::uint64_t size = t.enumerable_size(m);
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    const Element d = t.element_at(m, idx);
    if (s.contains(t.index_of(t.reduce(d, s.level), s.level))) r.members.push_back(idx);
  }
  return r;
}

bool coset_contains(const QuotientTower& t, const CosetSet& s, const Element& g) {
  return s.contains(t.index_of(t.reduce(g, s.level), s.level));
}

std::vector<Element> coset_elements(const QuotientTower& t, const CosetSet& s) {
  std::vector<Element> out;
  out.reserve(s.members.size());
  for (std::uint64_t idx : s.members) out.push_back(t.element_at(s.level, idx));
  return out;
}

CosetSet coset_all(const QuotientTower& t, std::size_t n, const Budget& budget) {
  require_enumerable(t, n, budget);
  CosetSet r{n, {}};
  const std::uint64_t size = t.enumerable_size(n);
  r.members.resize(size);
  for (std::uint64_t i = 0; i < size; ++i) r.members[i] = i;
  return r;
}

CosetSet per_set(const ToeplitzSkeleton& skel, std::size_t n, int alpha, const Budget& budget) {
  const QuotientTower& t = skel.tower();
  if (n > skel.depth()) {
    throw DepthExceeded("period sets at level " + std::to_string(n) + " need skeleton depth >= " + std::to_string(n));
  }
  require_enumerable(t, n, budget);
  CosetSet r{n, {}};
  const std::uint64_t size = t.enumerable_size(n);
  if (skel.fast_ok() && t.fast_ok(n)) {
    const std::size_t dim = t.dim();
    std::vector<std::int64_t> c(dim), lo(dim), hi(dim);
    for (std::size_t a = 0; a < dim; ++a) {
      lo[a] = t.fast_low(n, a);
      hi[a] = lo[a] + t.fast_modulus(n, a);
      c[a] = lo[a];
    }
    for (std::uint64_t idx = 0; idx < size; ++idx) {
      const int lvl = skel.level_of_fast(c.data());
      if (lvl >= 0 && static_cast<std::size_t>(lvl) < n && skel.eval_fast(c.data()) == alpha) r.members.push_back(idx);
      for (std::size_t a = 0; a < dim; ++a) {
        if (++c[a] < hi[a]) break;
        c[a] = lo[a];
      }
    }
    return r;
  }
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    const Element d = t.element_at(n, idx);
    auto lvl = skel.level_of(d);
    if (lvl && *lvl < n && skel.eval(d) == alpha) r.members.push_back(idx);
  }
  return r;
}

CosetSet ToeplitzArray::per_set(std::size_t n, int alpha, const Budget& budget) const {
  return toeplitz::per_set(*skel_, n, alpha, budget);
}

PeriodizedArray::PeriodizedArray(SkeletonPtr skel, std::size_t n, const Budget& budget)
    : skel_(std::move(skel)), level_(n), window_(materialize_window(*skel_, n, budget)) {}

std::optional<int> PeriodizedArray::value(const Element& g) const {
  const QuotientTower& t = skel_->tower();
  const int v = window_.get(t.index_of(t.reduce(g, level_), level_));
  if (v < 0) return std::nullopt;
  return v;
}

CosetSet PeriodizedArray::per_set(std::size_t m, int alpha, const Budget& budget) const {
  const QuotientTower& t = skel_->tower();
  require_enumerable(t, std::max(m, level_), budget);
  CosetSet r{m, {}};
  if (m >= level_) {
    const std::uint64_t size = t.enumerable_size(m);
    for (std::uint64_t idx = 0; idx < size; ++idx) {
      if (value(t.element_at(m, idx)) == alpha) r.members.push_back(idx);
    }
    return r;
  }
  // coarser level: a coset is periodic when every lift in D_level carries alpha
  std::vector<char> state(t.enumerable_size(m), 1);
  const std::uint64_t size = t.enumerable_size(level_);
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    const std::uint64_t c = t.index_of(t.reduce(t.element_at(level_, idx), m), m);
    if (window_.get(idx) != alpha) state[c] = 0;
  }
  for (std::uint64_t c = 0; c < state.size(); ++c) {
    if (state[c]) r.members.push_back(c);
  }
  return r;
}

CosetSet ConstantArray::per_set(std::size_t n, int alpha, const Budget& budget) const {
  if (alpha == symbol_) return coset_all(*tower_, n, budget);
  return CosetSet{n, {}};
}

std::optional<int> PointFlipArray::value(const Element& g) const {
  auto v = base_->value(g);
  if (v && g == flip_) return 1 - *v;
  return v;
}

CosetSet PointFlipArray::per_set(std::size_t n, int alpha, const Budget& budget) const {
  CosetSet base = base_->per_set(n, alpha, budget);
  const QuotientTower& t = base_->tower();
  CosetSet hole{n, {t.index_of(t.reduce(flip_, n), n)}};
  return coset_difference(base, hole);
}

CheckResult per_eq_check(const SymbolArray& x, std::size_t n, const Budget& budget) {
  CheckResult res;
  res.name = "per-eq";
  const QuotientTower& t = x.tower();
  require_enumerable(t, n, budget);
  // definitional union of J(i)Gamma_{i+1}, i < n, reduced mod Gamma_n
  std::vector<std::unordered_set<std::uint64_t>> jidx(n);
  std::vector<JSet> js;
  for (std::size_t i = 0; i < n; ++i) {
    js.push_back(j_set(t, i, budget));
    for (const Element& e : js.back().elements) jidx[i].insert(t.index_of(e, i));
  }
  CosetSet expected{n, {}};
  const std::uint64_t size = t.enumerable_size(n);
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    const Element d = t.element_at(n, idx);
    for (std::size_t i = 0; i < n; ++i) {
      const Element r = t.reduce(d, i + 1);
      if (t.in_domain(r, i) && jidx[i].count(t.index_of(r, i))) {
        expected.members.push_back(idx);
        break;
      }
    }
  }
  const CosetSet p0 = x.per_set(n, 0, budget);
  const CosetSet p1 = x.per_set(n, 1, budget);
  const CosetSet both = coset_intersection(p0, p1);
  if (!both.members.empty()) res.fail("coset " + coset_name(t, n, both.members.front()) + " lies in both period sets");
  const CosetSet got = coset_union(p0, p1);
  if (!(got == expected)) {
    CosetSet missing = coset_difference(expected, got);
    CosetSet extra = coset_difference(got, expected);
    if (!missing.members.empty()) {
      res.fail("coset " + coset_name(t, n, missing.members.front()) + " lies in the J-union but is not periodic");
    } else {
      res.fail("coset " + coset_name(t, n, extra.members.front()) + " is periodic but outside the J-union");
    }
  }
  // J(i) inside Per(Gamma_{i+1}) \ Per(Gamma_i)
  for (std::size_t i = 0; i < n; ++i) {
    const CosetSet upper = coset_union(x.per_set(i + 1, 0, budget), x.per_set(i + 1, 1, budget));
    const CosetSet lower = coset_union(x.per_set(i, 0, budget), x.per_set(i, 1, budget));
    for (const Element& g : js[i].elements) {
      if (!coset_contains(t, upper, g)) {
        res.fail(g.to_string() + " in J(" + std::to_string(i) + ") is not Gamma_" + std::to_string(i + 1) + "-periodic");
      } else if (coset_contains(t, lower, g)) {
        res.fail(g.to_string() + " in J(" + std::to_string(i) + ") is already Gamma_" + std::to_string(i) + "-periodic");
      }
    }
  }
  // periodic cosets are constant on their lifts through the evaluation level
  const std::size_t lift_level = std::min(x.evaluation_level(), t.depth());
  std::string lift_note = "no lift check (evaluation level below n)";
  if (lift_level >= n && t.enumerable_size(lift_level) <= budget.enumeration) {
    const std::uint64_t lsize = t.enumerable_size(lift_level);
    for (std::uint64_t idx = 0; idx < lsize; ++idx) {
      const Element e = t.element_at(lift_level, idx);
      const std::uint64_t c = t.index_of(t.reduce(e, n), n);
      for (int alpha = 0; alpha < 2; ++alpha) {
        if (!(alpha ? p1 : p0).contains(c)) continue;
        auto v = x.value(e);
        if (v != alpha) {
          res.fail("coset " + coset_name(t, n, c) + " is listed in Per(x,Gamma_" + std::to_string(n) + "," +
                   std::to_string(alpha) + ") but x(" + e.to_string() + ") = " + (v ? std::to_string(*v) : "undefined"));
        }
      }
    }
    lift_note = "lifts through D_" + std::to_string(lift_level);
  }
  res.scope = "exhaustive D_" + std::to_string(n) + " (" + std::to_string(size) + " cosets); J-sub for i < " +
              std::to_string(n) + "; " + lift_note;
  res.witnesses.push_back("|Per(x,Gamma_n,0)| = " + std::to_string(p0.size()));
  res.witnesses.push_back("|Per(x,Gamma_n,1)| = " + std::to_string(p1.size()));
  return res;
}

CheckResult essential_check(const SymbolArray& x, std::size_t n, const Budget& budget) {
  const QuotientTower& t = x.tower();
  if (!t.abelian()) throw NonAbelianUnsupported("essential-period check needs an abelian tower");
  CheckResult res;
  res.name = "essential";
  require_enumerable(t, n, budget);
  const CosetSet p[2] = {x.per_set(n, 0, budget), x.per_set(n, 1, budget)};
  const std::uint64_t size = t.enumerable_size(n);
  std::uint64_t witnessed = 0;
  for (std::uint64_t gi = 0; gi < size; ++gi) {
    const Element g = t.element_at(n, gi);
    if (t.is_identity(g)) continue;
    const Element ginv = t.inv(g);
    bool found = false;
    for (int alpha = 0; alpha < 2 && !found; ++alpha) {
      for (std::uint64_t c : p[alpha].members) {
        const Element moved = t.mul(ginv, t.element_at(n, c));
        if (!coset_contains(t, p[alpha], moved)) {
          found = true;
          if (res.witnesses.size() < 8) {
            res.witnesses.push_back("g=" + g.to_string() + ": " + coset_name(t, n, c) + " in Per(x,Gamma_n," +
                                    std::to_string(alpha) + "), g^-1 c not");
          }
          break;
        }
      }
    }
    if (found) {
      ++witnessed;
    } else {
      res.fail("g=" + g.to_string() + " leaves both period sets of level " + std::to_string(n) + " invariant");
    }
  }
  res.scope = "exhaustive D_" + std::to_string(n) + " \\ {1} (" + std::to_string(witnessed) + " witnessed)";
  return res;
}

CheckResult per1_structure_check(const ToeplitzSkeleton& skel, std::size_t s, const Budget& budget) {
  CheckResult res;
  res.name = "periodo1";
  const QuotientTower& t = skel.tower();
  if (s == 0 || s > skel.depth()) throw DepthExceeded("periodo1 needs 1 <= s <= depth");
  CosetSet expected = coset_lift(t, CosetSet{1, {t.index_of(t.identity(), 1)}}, s, budget);
  for (std::size_t step = 2; step <= s; ++step) {
    const Element* h = skel.planted(step);
    if (!h) continue;
    expected = coset_union(expected, coset_lift(t, CosetSet{step, {t.index_of(*h, step)}}, s, budget));
  }
  const CosetSet got = per_set(skel, s, 1, budget);
  if (!(got == expected)) {
    CosetSet diff = coset_union(coset_difference(got, expected), coset_difference(expected, got));
    res.fail("Per(eta,Gamma_" + std::to_string(s) + ",1) and the planted union differ at " +
             coset_name(t, s, diff.members.front()));
  }
  res.scope = "Per(eta,Gamma_" + std::to_string(s) + ",1) over D_" + std::to_string(s);
  if (skel.in_subsequence(s)) {
    if (s + 1 <= skel.depth()) {
      const CosetSet lifted = coset_lift(t, got, s + 1, budget);
      const CosetSet next = per_set(skel, s + 1, 1, budget);
      if (!(lifted == next)) {
        res.fail("block end n=" + std::to_string(s) + ": Per(eta,Gamma_n,1) differs from Per(eta,Gamma_{n+1},1)");
      }
      res.scope += "; block-end identity at n=" + std::to_string(s);
    } else {
      res.notes.push_back("block-end identity at n=" + std::to_string(s) + " needs depth " + std::to_string(s + 1));
    }
  }
  res.witnesses.push_back("|Per(eta,Gamma_s,1) cap D_s| = " + std::to_string(got.size()));
  return res;
}

CoverResult auxiliar_cover_check(const ToeplitzSkeleton& skel, std::size_t i, const Element& gamma,
                                 const Budget& budget) {
  CoverResult out;
  out.check.name = "auxiliar";
  const QuotientTower& t = skel.tower();
  if (!t.in_subgroup(gamma, i)) throw ConfigError(gamma.to_string() + " is not in Gamma_" + std::to_string(i));
  const JSet ji = j_set(t, i, budget);
  std::optional<std::size_t> common;
  bool undetermined = false;
  for (const Element& g : ji.elements) {
    const Element p = t.mul(gamma, g);
    auto lvl = skel.level_of(p);
    if (!lvl) {
      undetermined = true;
      continue;
    }
    if (!common) {
      common = lvl;
    } else if (*common != *lvl) {
      out.check.fail("gamma*J(" + std::to_string(i) + ") meets levels " + std::to_string(*common) + " and " +
                     std::to_string(*lvl) + " (at " + p.to_string() + ")");
    }
  }
  out.check.scope = "gamma=" + gamma.to_string() + ", |J(" + std::to_string(i) + ")|=" +
                    std::to_string(ji.elements.size()) + ", levels < " + std::to_string(skel.depth());
  if (out.check.failed()) return out;
  if (undetermined) {
    out.check.inconclusive("some element of gamma*J(i) lies beyond the constructed depth");
    return out;
  }
  if (common && *common < i) out.check.fail("covering level " + std::to_string(*common) + " is below i");
  out.level = common;
  if (common) out.check.witnesses.push_back("l=" + std::to_string(*common));
  return out;
}

void partitions_c_visit(const ToeplitzSkeleton& skel, std::size_t k, const JSet& jk, const Element& gamma,
                        PartitionsCStats& stats) {
  const QuotientTower& t = skel.tower();
  int ones = 0;
  bool undefined = false;
  for (const Element& g : jk.elements) {
    auto v = skel.eval(t.mul(gamma, g));
    if (!v) {
      undefined = true;
    } else {
      ones += *v;
    }
  }
  ++stats.translates;
  if (ones > 1) {
    ++stats.violations;
    if (!stats.first_violation) {
      stats.first_violation = "gamma=" + gamma.to_string() + " gives " + std::to_string(ones) + " ones on gamma*J(" +
                              std::to_string(k) + ")";
    }
  } else if (undefined) {
    ++stats.undetermined;
  }
}

CheckResult partitions_c_check(const ToeplitzSkeleton& skel, std::size_t k, std::size_t window, std::uint64_t samples,
                               std::size_t sample_level, std::uint64_t seed, const Budget& budget) {
  CheckResult res;
  res.name = "partitions-c";
  const QuotientTower& t = skel.tower();
  const JSet jk = j_set(t, k, budget);
  PartitionsCStats exhaustive;
  const std::size_t top = std::min(k + window, t.depth());
  if (t.enumerable_size(top) / std::max<std::uint64_t>(t.enumerable_size(k), 1) > budget.enumeration) {
    throw BudgetExceeded("Gamma_k cap D_" + std::to_string(top) + " exceeds the enumeration budget");
  }
  for (const Element& gamma : t.subgroup_domain(k, top)) partitions_c_visit(skel, k, jk, gamma, exhaustive);
  PartitionsCStats sampled;
  if (samples > 0) {
    const std::size_t lvl = std::min(sample_level, t.depth());
    const std::uint64_t size = t.enumerable_size(lvl);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, size - 1);
    for (std::uint64_t i = 0; i < samples; ++i) {
      const Element d = t.element_at(lvl, pick(rng));
      const Element gamma = lvl > k ? t.tile_decompose(d, lvl, k).first : t.identity();
      partitions_c_visit(skel, k, jk, gamma, sampled);
    }
  }
  if (exhaustive.first_violation) res.fail(*exhaustive.first_violation);
  if (sampled.first_violation) res.fail(*sampled.first_violation + " (sampled)");
  res.scope = "k=" + std::to_string(k) + ": exhaustive Gamma_k cap D_" + std::to_string(top) + " (" +
              std::to_string(exhaustive.translates) + " translates, " + std::to_string(exhaustive.undetermined) +
              " undetermined)";
  if (samples > 0) {
    res.scope += "; " + std::to_string(sampled.translates) + " seeded samples in Gamma_k cap D_" +
                 std::to_string(std::min(sample_level, t.depth())) + " (seed " + std::to_string(seed) + ", " +
                 std::to_string(sampled.undetermined) + " undetermined)";
  }
  res.witnesses.push_back("violations=" + std::to_string(exhaustive.violations + sampled.violations));
  return res;
}

}  // namespace toeplitz
