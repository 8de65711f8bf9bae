#include "toeplitz/verify.hpp"

#include <algorithm>
#include <chrono>

#include "fastbox.hpp"
#include "toeplitz/cells.hpp"
#include "toeplitz/density.hpp"
#include "toeplitz/errors.hpp"
#include "toeplitz/factor.hpp"
#include "toeplitz/measures.hpp"
#include "toeplitz/periods.hpp"

namespace toeplitz {

std::size_t VerifyContext::top() const { return std::min(skel->depth(), max_level.value_or(skel->depth())); }

namespace {

// Largest n <= limit with |D_n| <= cap (0 if none).
std::size_t enumerable_top(const QuotientTower& t, std::size_t limit, std::uint64_t cap) {
  std::size_t n = 0;
  for (std::size_t l = 1; l <= std::min(limit, t.depth()); ++l) {
    if (t.enumerable_size(l) > cap) break;
    n = l;
  }
  return n;
}

void absorb(CheckResult& into, const CheckResult& part) {
  if (part.failed()) into.fail(*part.counterexample);
  for (const auto& n : part.notes) into.notes.push_back(n);
  if (part.status == CheckStatus::Inconclusive) into.inconclusive(part.name + ": " + part.scope);
  if (part.status == CheckStatus::Vacated) into.vacate(part.name + ": " + part.scope);
}

std::string levels_text(const std::vector<std::size_t>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return "{" + s + "}";
}

// Subsequence levels n_k = m_k - 1 that lie inside the tower.
std::vector<std::size_t> tower_M(const ToeplitzSkeleton& skel) { return subsequence_within_tower(skel); }

// Block index k with n_k = n.
std::optional<std::size_t> block_of(const ToeplitzSkeleton& skel, std::size_t n) {
  for (std::size_t k = 0; k < skel.m_k().size(); ++k) {
    if (skel.m_k()[k] == static_cast<unsigned long>(n + 1)) return k;
  }
  return std::nullopt;
}

std::optional<bool> linking_for(const ToeplitzSkeleton& skel, std::size_t k) {
  return k < skel.linking_ok().size() ? skel.linking_ok()[k] : std::nullopt;
}

// gamma outside D_l Gamma_{l+1} for every l in [n+1, m-1]
class RelationTest {
 public:
  RelationTest(const QuotientTower& t, std::size_t n, std::size_t m) : t_(t), n_(n), m_(m), fast_(t.fast_ok(m)), fb_{t} {}

  bool operator()(const Element& g) const {
    if (fast_) {
      const std::vector<std::int64_t> c = fb_.from(g);
      std::vector<std::int64_t> r(c.size());
      for (std::size_t l = n_ + 1; l < m_; ++l) {
        fb_.reduce(c.data(), l + 1, r.data());
        if (fb_.in_domain(r.data(), l)) return false;
      }
      return true;
    }
    for (std::size_t l = n_ + 1; l < m_; ++l) {
      if (t_.in_domain(t_.reduce(g, l + 1), l)) return false;
    }
    return true;
  }

 private:
  const QuotientTower& t_;
  std::size_t n_, m_;
  bool fast_;
  detail::FastBox fb_;
};

}  // namespace

GoodRelation good_relation(const QuotientTower& t, std::size_t n, std::size_t m, const Budget& budget) {
  if (m < n + 2) throw ConfigError("good relation needs m >= n + 2");
  if (m > t.depth()) throw DepthExceeded("good relation at m=" + std::to_string(m) + " exceeds the tower depth");
  if (t.enumerable_size(m) / t.enumerable_size(n + 1) > budget.enumeration) {
    throw BudgetExceeded("Gamma_{n+1} cap D_m exceeds the enumeration budget");
  }
  GoodRelation g;
  g.n = n;
  g.m = m;
  g.bound = make_rational(t.domain_size(m), t.domain_size(n + 1));
  for (std::size_t l = 1; l + n + 1 <= m; ++l) g.bound *= 1 - make_rational(t.domain_size(n + l), t.domain_size(n + l + 1));
  const RelationTest outside(t, n, m);
  for (const Element& gamma : t.subgroup_domain(n + 1, m)) {
    if (outside(gamma)) g.qualifying.push_back(gamma);
  }
  const std::uint64_t dsize = t.enumerable_size(n + 1);
  for (const Element& gamma : g.qualifying) {
    for (std::uint64_t i = 0; i < dsize; ++i) {
      const Element x = t.mul(gamma, t.element_at(n + 1, i));
      if (!t.in_domain(x, m) || !outside(x)) {
        g.containment_failure = "gamma=" + gamma.to_string() + " sends " + t.element_at(n + 1, i).to_string() + " to " +
                                x.to_string() + ", outside the difference set";
        return g;
      }
    }
  }
  return g;
}

PatchStats good_patches_scan(SkeletonPtr skel, std::size_t n, std::size_t m, const Budget& budget) {
  const QuotientTower& t = skel->tower();
  PatchStats st;
  const GoodRelation rel = good_relation(t, n, m, budget);
  const JSet jn = j_set(t, n, budget);
  const auto gammas = t.subgroup_domain(n, n + 1);
  OrbitOracle oracle(skel, budget);
  for (const Element& g0 : rel.qualifying) {
    ++st.qualifying;
    bool patch = true, undetermined = false;
    for (const Element& gamma : gammas) {
      for (const Element& u : jn.elements) {
        auto a = skel->eval(t.mul(g0, t.mul(gamma, u)));
        auto b = skel->eval(u);
        if (!a || !b) {
          undetermined = true;
        } else if (*a != *b) {
          patch = false;
        }
      }
    }
    if (!patch) {
      ++st.patch_failed;
      continue;
    }
    if (undetermined) {
      ++st.undetermined;
      continue;
    }
    ++st.patching;
    auto in_u = oracle.in_Un(g0, n);
    if (!in_u) {
      ++st.undetermined;
    } else if (*in_u) {
      ++st.in_u;
      st.in_u_witnesses.push_back(g0);
    } else if (!st.violation) {
      st.violation = "gamma_0=" + g0.to_string() + " (n=" + std::to_string(n) + ", m=" + std::to_string(m) +
                     ") satisfies the relation and Patching, but sigma^{gamma_0^-1} eta is not in U_n";
    }
  }
  return st;
}

std::vector<Element> orbit_representatives(SkeletonPtr skel, std::size_t n, const Budget& budget) {
  const QuotientTower& t = skel->tower();
  std::vector<Element> reps;
  const std::size_t base = std::min(n + 1, t.depth());
  const std::uint64_t size = t.enumerable_size(base);
  if (size > budget.enumeration) throw BudgetExceeded("D_{n+1} exceeds the enumeration budget");
  for (std::uint64_t i = 0; i < size; ++i) reps.push_back(t.element_at(base, i));
  for (std::size_t m = n + 2; m <= std::min(skel->depth(), t.depth()); ++m) {
    if (t.enumerable_size(m) / t.enumerable_size(n + 1) > budget.enumeration) break;
    for (const Element& g : good_relation(t, n, m, budget).qualifying) reps.push_back(g);
  }
  std::sort(reps.begin(), reps.end());
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
  return reps;
}

ContainmentStats u_in_y_scan(SkeletonPtr skel, std::size_t n, const Budget& budget) {
  ContainmentStats st;
  OrbitOracle oracle(skel, budget);
  for (const Element& v : orbit_representatives(skel, n, budget)) {
    ++st.representatives;
    auto u = oracle.in_Un(v, n);
    if (!u) {
      ++st.undetermined;
      continue;
    }
    if (!*u) continue;
    ++st.premise;
    auto y = oracle.in_Yn(v, n);
    if (!y) {
      ++st.undetermined;
    } else if (*y) {
      ++st.conclusion;
    } else if (!st.violation) {
      st.violation = "sigma^{v^-1} eta with v=" + v.to_string() + " lies in U_" + std::to_string(n) + " but not in Y_" +
                     std::to_string(n);
    }
  }
  return st;
}

ContainmentStats y_in_z_scan(SkeletonPtr skel, std::size_t n, const Budget& budget) {
  const QuotientTower& t = skel->tower();
  ContainmentStats st;
  OrbitOracle oracle(skel, budget);
  const std::uint64_t dsize = t.enumerable_size(n + 1);
  for (const Element& a : orbit_representatives(skel, n, budget)) {
    ++st.representatives;
    auto y = oracle.in_Yn(a, n);
    if (!y) {
      ++st.undetermined;
      continue;
    }
    if (!*y) continue;
    ++st.premise;
    bool all = true, undetermined = false;
    for (std::uint64_t i = 0; i < dsize && all; ++i) {
      const Element v = t.element_at(n + 1, i);
      auto z = oracle.in_Zn(t.mul(a, v), n);
      if (!z) {
        undetermined = true;
      } else if (!*z) {
        all = false;
        if (!st.violation) {
          st.violation = "a=" + a.to_string() + " lies in Y_" + std::to_string(n) + " but its shift by v=" + v.to_string() +
                         " is not in Z_" + std::to_string(n);
        }
      }
    }
    if (undetermined && all) {
      ++st.undetermined;
    } else if (all) {
      ++st.conclusion;
    }
  }
  return st;
}

namespace {

CheckResult check_decom(const VerifyContext& ctx) {
  const QuotientTower& t = ctx.skel->tower();
  return validate_tower(t, t.depth(), ctx.budget);
}

CheckResult check_j_recursion(const VerifyContext& ctx) {
  CheckResult res;
  const QuotientTower& t = ctx.skel->tower();
  const std::size_t top = enumerable_top(t, std::min(ctx.top() + 1, t.depth()), std::min<std::uint64_t>(ctx.budget.enumeration, 1u << 20));
  for (std::size_t n = 1; n <= top && !res.failed(); ++n) {
    const JSet a = j_set(t, n, ctx.budget);
    const JSet b = j_set_recursive(t, n, ctx.budget);
    if (a.elements != b.elements) {
      res.fail("J(" + std::to_string(n) + ") from the definition has " + std::to_string(a.elements.size()) +
               " elements, the recursion gives " + std::to_string(b.elements.size()) + " (or a different set)");
    } else {
      res.witnesses.push_back("|J(" + std::to_string(n) + ")| = " + std::to_string(a.elements.size()));
    }
    if (j_size(t, n) != static_cast<unsigned long>(a.elements.size())) res.fail("closed-form |J(" + std::to_string(n) + ")| disagrees");
  }
  if (top == 0) res.inconclusive("no level within the enumeration budget");
  res.scope = "exhaustive for n in [1," + std::to_string(top) + "]";
  return res;
}

CheckResult check_per_eq(const VerifyContext& ctx) {
  CheckResult res;
  const ToeplitzArray arr(ctx.skel);
  const std::size_t top = enumerable_top(ctx.skel->tower(), ctx.top(), ctx.budget.enumeration);
  for (std::size_t n = 1; n <= top && !res.failed(); ++n) absorb(res, per_eq_check(arr, n, ctx.budget));
  if (top == 0) res.inconclusive("needs depth >= 1");
  res.scope = "exhaustive D_" + std::to_string(top) + ", n in [1," + std::to_string(top) + "]";
  return res;
}

CheckResult check_j_sub(const VerifyContext& ctx) {
  CheckResult res;
  const ToeplitzSkeleton& skel = *ctx.skel;
  const QuotientTower& t = skel.tower();
  const std::size_t top = enumerable_top(t, ctx.top(), ctx.budget.enumeration);
  for (std::size_t n = 0; n < top && !res.failed(); ++n) {
    const CosetSet upper = coset_union(per_set(skel, n + 1, 0, ctx.budget), per_set(skel, n + 1, 1, ctx.budget));
    const CosetSet lower = coset_union(per_set(skel, n, 0, ctx.budget), per_set(skel, n, 1, ctx.budget));
    const JSet jn = j_set(t, n, ctx.budget);
    for (const Element& g : jn.elements) {
      if (!coset_contains(t, upper, g)) {
        res.fail(g.to_string() + " in J(" + std::to_string(n) + ") is not Gamma_" + std::to_string(n + 1) + "-periodic");
        break;
      }
      if (coset_contains(t, lower, g)) {
        res.fail(g.to_string() + " in J(" + std::to_string(n) + ") is already Gamma_" + std::to_string(n) + "-periodic");
        break;
      }
    }
    res.witnesses.push_back("J(" + std::to_string(n) + "): " + std::to_string(jn.elements.size()) + " elements");
  }
  if (top == 0) res.inconclusive("needs depth >= 1");
  res.scope = "n in [0," + std::to_string(top == 0 ? 0 : top - 1) + "]";
  return res;
}

CheckResult check_essential(const VerifyContext& ctx) {
  CheckResult res;
  const ToeplitzArray arr(ctx.skel);
  const std::size_t top = enumerable_top(ctx.skel->tower(), ctx.top(), 4096);
  for (std::size_t n = 1; n <= top && !res.failed(); ++n) {
    CheckResult part = essential_check(arr, n, ctx.budget);
    absorb(res, part);
    if (!part.witnesses.empty()) res.witnesses.push_back("n=" + std::to_string(n) + ": " + part.witnesses.front());
  }
  if (top == 0) res.inconclusive("needs depth >= 1");
  res.scope = "g in D_n \\ {1}, n in [1," + std::to_string(top) + "]";
  return res;
}

CheckResult check_periodo1(const VerifyContext& ctx) {
  CheckResult res;
  const std::size_t top = enumerable_top(ctx.skel->tower(), ctx.top(), ctx.budget.enumeration);
  for (std::size_t s = 1; s <= top && !res.failed(); ++s) {
    CheckResult part = per1_structure_check(*ctx.skel, s, ctx.budget);
    absorb(res, part);
    res.witnesses.push_back("s=" + std::to_string(s) + ": " + part.witnesses.back());
  }
  if (top == 0) res.inconclusive("needs depth >= 1");
  res.scope = "s in [1," + std::to_string(top) + "]";
  return res;
}

CheckResult check_auxiliar(const VerifyContext& ctx) {
  CheckResult res;
  const ToeplitzSkeleton& skel = *ctx.skel;
  const QuotientTower& t = skel.tower();
  std::uint64_t covered = 0, undetermined = 0;
  std::size_t last = 0;
  for (std::size_t i = 1; i < ctx.top() && !res.failed(); ++i) {
    const std::size_t j = std::min(i + 2, t.depth());
    if (t.enumerable_size(j) / t.enumerable_size(i) > 4096 || t.enumerable_size(i) > 1u << 16) break;
    last = i;
    for (const Element& gamma : t.subgroup_domain(i, j)) {
      CoverResult c = auxiliar_cover_check(skel, i, gamma, ctx.budget);
      if (c.check.failed()) {
        res.fail(*c.check.counterexample);
        break;
      }
      if (c.level) {
        ++covered;
      } else {
        ++undetermined;
      }
    }
  }
  res.witnesses.push_back(std::to_string(covered) + " translates gamma*J(i) inside a single J(l)Gamma_{l+1}");
  if (undetermined) res.notes.push_back(std::to_string(undetermined) + " translates reach beyond the constructed depth");
  if (covered == 0 && !res.failed()) res.inconclusive("no translate determined at this depth");
  res.scope = "gamma in Gamma_i cap D_{i+2}, i in [1," + std::to_string(last) + "]";
  return res;
}

CheckResult check_regular_eta(const VerifyContext& ctx) {
  CheckResult res;
  const ToeplitzSkeleton& skel = *ctx.skel;
  const std::size_t top = ctx.top();
  std::size_t enumerated = 0;
  for (std::size_t n = 1; n <= top && !res.failed(); ++n) {
    const DensityMethods m = d_methods(skel, n, ctx.budget);
    if (!m.agree) {
      res.fail("d_" + std::to_string(n) + ": recursion " + to_fraction_string(m.recursion) + ", closed form " +
               to_fraction_string(m.closed_form) +
               (m.enumeration ? ", enumeration " + to_fraction_string(*m.enumeration) : std::string()));
    }
    if (m.enumeration) ++enumerated;
    res.witnesses.push_back("d_" + std::to_string(n) + " = " + to_fraction_string(m.recursion));
  }
  if (top == 0) res.inconclusive("needs depth >= 1");
  res.scope = "n in [1," + std::to_string(top) + "], enumeration at " + std::to_string(enumerated) + " levels";
  return res;
}

CheckResult check_good_relation(const VerifyContext& ctx) {
  CheckResult res;
  const QuotientTower& t = ctx.skel->tower();
  std::size_t pairs = 0, maxm = 0;
  for (std::size_t m = 2; m <= t.depth() && !res.failed(); ++m) {
    if (t.enumerable_size(m) > ctx.budget.enumeration) break;
    maxm = m;
    for (std::size_t n = 0; n + 2 <= m && !res.failed(); ++n) {
      const GoodRelation g = good_relation(t, n, m, ctx.budget);
      ++pairs;
      const Rational count = g.count();
      if (g.count() == 0) {
        res.fail("no gamma satisfies the relation for n=" + std::to_string(n) + ", m=" + std::to_string(m));
      } else if (count < g.bound) {
        res.fail("N_{" + std::to_string(m) + "," + std::to_string(n) + "} = " + std::to_string(g.count()) +
                 " is below the bound " + to_fraction_string(g.bound));
      } else if (g.containment_failure) {
        res.fail(*g.containment_failure);
      }
      if (res.witnesses.size() < 16) {
        res.witnesses.push_back("N_{" + std::to_string(m) + "," + std::to_string(n) + "} = " + std::to_string(g.count()) +
                                " >= " + to_fraction_string(g.bound));
      }
    }
  }
  if (pairs == 0) res.inconclusive("needs a tower with at least two levels");
  res.scope = std::to_string(pairs) + " pairs 0 <= n, n+2 <= m <= " + std::to_string(maxm);
  return res;
}

CheckResult check_good_patches(const VerifyContext& ctx) {
  CheckResult res;
  const ToeplitzSkeleton& skel = *ctx.skel;
  const QuotientTower& t = skel.tower();
  PatchStats total;
  std::size_t pairs = 0;
  for (std::size_t n = 0; n + 1 <= ctx.top() && n + 1 <= skel.depth() && !res.failed(); ++n) {
    for (std::size_t m = n + 2; m <= std::min(skel.depth(), t.depth()); ++m) {
      if (t.enumerable_size(m) / t.enumerable_size(n + 1) > ctx.budget.enumeration) break;
      const PatchStats st = good_patches_scan(ctx.skel, n, m, ctx.budget);
      ++pairs;
      total.qualifying += st.qualifying;
      total.patching += st.patching;
      total.in_u += st.in_u;
      total.patch_failed += st.patch_failed;
      total.undetermined += st.undetermined;
      if (st.violation) {
        res.fail(*st.violation);
        break;
      }
      if (!st.in_u_witnesses.empty() && res.witnesses.size() < 12) {
        res.witnesses.push_back("(n=" + std::to_string(n) + ", m=" + std::to_string(m) + "): gamma_0=" +
                                st.in_u_witnesses.front().to_string() + " in U_n");
      }
    }
  }
  res.notes.push_back(std::to_string(total.qualifying) + " qualifying gamma_0, " + std::to_string(total.patching) +
                      " with Patching, " + std::to_string(total.in_u) + " confirmed in U_n, " +
                      std::to_string(total.patch_failed) + " without Patching (hypothesis unmet), " +
                      std::to_string(total.undetermined) + " beyond depth");
  if (!res.failed() && total.in_u == 0) res.inconclusive("no gamma_0 with Patching was determined at this depth");
  res.scope = std::to_string(pairs) + " pairs (n, m), m >= n+2, m <= depth " + std::to_string(skel.depth());
  return res;
}

CheckResult check_t1t2(const VerifyContext& ctx) {
  CheckResult res;
  const ToeplitzSkeleton& skel = *ctx.skel;
  const QuotientTower& t = skel.tower();
  const auto M = tower_M(skel);
  std::uint64_t checked = 0, undetermined = 0;
  std::vector<std::string> pairs;
  for (std::size_t a = 0; a < M.size() && !res.failed(); ++a) {
    const std::size_t nk = M[a];
    if (nk > ctx.top()) break;
    for (std::size_t b = a + 1; b < M.size() && !res.failed(); ++b) {
      const std::size_t nj = M[b];
      if (nj >= skel.depth()) {
        res.notes.push_back("pair (" + std::to_string(nk) + "," + std::to_string(nj) + ") needs depth > " + std::to_string(nj));
        continue;
      }
      if (t.enumerable_size(nj) / t.enumerable_size(nk + 1) > ctx.budget.enumeration) continue;
      pairs.push_back("(" + std::to_string(nk) + "," + std::to_string(nj) + ")");
      const GoodRelation rel = good_relation(t, nk, nj, ctx.budget);
      const JSet jk = j_set(t, nk, ctx.budget);
      const auto gammas = t.subgroup_domain(nk, nk + 1);
      for (const Element& g0 : rel.qualifying) {
        for (const Element& gamma : gammas) {
          for (const Element& u : jk.elements) {
            auto x = skel.eval(t.mul(g0, t.mul(gamma, u)));
            auto y = skel.eval(u);
            if (!x || !y) {
              ++undetermined;
              continue;
            }
            ++checked;
            if (*x != *y && !res.failed()) {
              res.fail("gamma_0=" + g0.to_string() + ", gamma=" + gamma.to_string() + ", u=" + u.to_string() +
                       ": eta(gamma_0 gamma u)=" + std::to_string(*x) + " but eta(u)=" + std::to_string(*y));
            }
          }
        }
      }
    }
  }
  res.witnesses.push_back(std::to_string(checked) + " identities eta(gamma_0 gamma u) = eta(u)");
  if (undetermined) res.notes.push_back(std::to_string(undetermined) + " values beyond the constructed depth");
  if (checked == 0 && !res.failed()) res.inconclusive("no pair of subsequence levels within depth");
  res.scope = "pairs n_k < n_j in M: " + (pairs.empty() ? std::string("none") : [&] {
    std::string s;
    for (const auto& p : pairs) s += p;
    return s;
  }());
  return res;
}

CheckResult check_partitions_c(const VerifyContext& ctx) {
  CheckResult res;
  const ToeplitzSkeleton& skel = *ctx.skel;
  const QuotientTower& t = skel.tower();
  std::size_t top = 0;
  for (std::size_t k = 1; k <= std::min<std::size_t>(3, ctx.top()) && !res.failed(); ++k) {
    const std::size_t window = std::min(k + 2, t.depth());
    const double jk = static_cast<double>(j_size(t, k).get_d());
    const double work = static_cast<double>(t.enumerable_size(window) / t.enumerable_size(k)) * jk;
    if (work > static_cast<double>(ctx.budget.enumeration)) {
      res.notes.push_back("k=" + std::to_string(k) + " skipped: Gamma_k cap D_" + std::to_string(window) +
                          " times |J(k)| exceeds the enumeration budget");
      break;
    }
    top = k;
    const auto samples = std::min<std::uint64_t>(ctx.samples, static_cast<std::uint64_t>(ctx.budget.enumeration / jk));
    CheckResult part = partitions_c_check(skel, k, 2, samples, t.depth(), ctx.seed + k, ctx.budget);
    absorb(res, part);
    for (const auto& w : part.witnesses) res.witnesses.push_back("k=" + std::to_string(k) + ": " + w);
  }
  if (top == 0) res.inconclusive("needs depth >= 1");
  res.scope = "k in [1," + std::to_string(top) + "], exhaustive Gamma_k cap D_{k+2} plus " + std::to_string(ctx.samples) +
              " seeded samples per k (seed " + std::to_string(ctx.seed) + ")";
  return res;
}

CheckResult check_linking(const VerifyContext& ctx) {
  CheckResult res;
  const auto& ok = ctx.skel->linking_ok();
  std::vector<std::size_t> good, bad;
  for (std::size_t k = 0; k < ok.size(); ++k) {
    if (!ok[k]) continue;
    (*ok[k] ? good : bad).push_back(k);
  }
  res.witnesses.push_back("blocks satisfying the condition: " + levels_text(good));
  if (!bad.empty()) {
    res.vacate("the tower and planted elements violate the linking condition at blocks " + levels_text(bad) +
               "; it is a hypothesis of the construction, and checks relying on it are vacated");
  } else if (good.empty()) {
    res.inconclusive("no block is checkable at this depth");
  }
  res.scope = "blocks with m_k within the tower and step m_k - 1 constructed";
  return res;
}

CheckResult check_good_ds(const VerifyContext& ctx) {
  CheckResult res;
  const ToeplitzSkeleton& skel = *ctx.skel;
  const QuotientTower& t = skel.tower();
  std::vector<std::size_t> done;
  for (std::size_t nk : tower_M(skel)) {
    if (nk < 2 || nk > ctx.top() || nk + 1 > skel.depth() || res.failed()) continue;
    if (t.enumerable_size(nk + 1) > ctx.budget.enumeration) continue;
    const CosetSet low = per_set(skel, nk - 1, 1, ctx.budget);
    const CosetSet high = per_set(skel, nk + 1, 1, ctx.budget);
    const std::uint64_t wsize = t.enumerable_size(nk - 1);
    const std::uint64_t esize = t.enumerable_size(nk + 1);
    for (std::uint64_t wi = 0; wi < wsize && !res.failed(); ++wi) {
      const Element w = t.element_at(nk - 1, wi);
      if (t.is_identity(w)) continue;
      const Element winv = t.inv(w);
      std::optional<Element> gw;
      for (std::uint64_t ei = 0; ei < esize && !gw; ++ei) {
        if (high.contains(ei)) continue;
        const Element e = t.element_at(nk + 1, ei);
        const Element g = t.mul(winv, e);
        if (coset_contains(t, low, g)) gw = g;
      }
      if (!gw) {
        res.fail("n_k=" + std::to_string(nk) + ", w=" + w.to_string() + ": no g in Per(eta,Gamma_{n_k-1},1) with w*g in D_{n_k+1} outside Per(eta,Gamma_{n_k+1},1)");
      } else if (res.witnesses.size() < 8) {
        res.witnesses.push_back("n_k=" + std::to_string(nk) + ", w=" + w.to_string() + ": g_w=" + gw->to_string());
      }
    }
    done.push_back(nk);
  }
  if (done.empty() && !res.failed()) res.inconclusive("no n_k >= 2 in M with n_k + 1 within depth");
  res.scope = "n_k in " + levels_text(done) + ", every w in D_{n_k-1} \\ {1}";
  return res;
}

// Subsequence levels usable by the orbit-representative checks.
std::vector<std::size_t> orbit_levels(const VerifyContext& ctx) {
  std::vector<std::size_t> out;
  const QuotientTower& t = ctx.skel->tower();
  for (std::size_t nk : tower_M(*ctx.skel)) {
    if (nk > ctx.top() || nk + 1 > ctx.skel->depth()) continue;
    if (t.enumerable_size(nk + 1) > (1u << 12)) continue;
    out.push_back(nk);
  }
  return out;
}

CheckResult check_u_in_y(const VerifyContext& ctx) {
  CheckResult res;
  const auto levels = orbit_levels(ctx);
  std::uint64_t premise = 0, conclusion = 0, undetermined = 0, reps = 0;
  std::vector<std::size_t> vacated;
  for (std::size_t nk : levels) {
    const ContainmentStats st = u_in_y_scan(ctx.skel, nk, ctx.budget);
    premise += st.premise;
    conclusion += st.conclusion;
    undetermined += st.undetermined;
    reps += st.representatives;
    const auto k = block_of(*ctx.skel, nk);
    const auto link = k ? linking_for(*ctx.skel, *k) : std::nullopt;
    if (link && !*link) {
      vacated.push_back(nk);
      if (st.violation) res.notes.push_back("not a counterexample (linking unmet): " + *st.violation);
      continue;
    }
    if (st.violation) res.fail(*st.violation);
  }
  res.witnesses.push_back(std::to_string(premise) + " representatives in U_{n_k}, " + std::to_string(conclusion) +
                          " confirmed in Y_{n_k}, " + std::to_string(reps) + " representatives examined");
  if (undetermined) res.notes.push_back(std::to_string(undetermined) + " memberships beyond the constructed depth");
  if (!vacated.empty()) res.vacate("linking condition fails for the blocks of n_k in " + levels_text(vacated));
  if (levels.empty()) {
    res.inconclusive("no n_k in M with n_k + 1 within depth");
  } else if (premise == 0 && !res.failed()) {
    res.inconclusive("no representative lies in U_{n_k} at this depth");
  }
  res.scope = "n_k in " + levels_text(levels) + ", representatives D_{n_k+1} and good-patches gamma_0";
  return res;
}

CheckResult check_y_in_z(const VerifyContext& ctx) {
  CheckResult res;
  const auto levels = orbit_levels(ctx);
  std::uint64_t premise = 0, conclusion = 0, undetermined = 0;
  for (std::size_t nk : levels) {
    const ContainmentStats st = y_in_z_scan(ctx.skel, nk, ctx.budget);
    premise += st.premise;
    conclusion += st.conclusion;
    undetermined += st.undetermined;
    if (st.violation) res.fail(*st.violation);
  }
  res.witnesses.push_back(std::to_string(premise) + " representatives in Y_{n_k}, " + std::to_string(conclusion) +
                          " with every D_{n_k+1}-shift in Z_{n_k}");
  if (undetermined) res.notes.push_back(std::to_string(undetermined) + " representatives not fully determined");
  if (levels.empty()) {
    res.inconclusive("no n_k in M with n_k + 1 within depth");
  } else if (premise == 0 && !res.failed()) {
    res.inconclusive("no representative lies in Y_{n_k} at this depth");
  }
  res.scope = "n_k in " + levels_text(levels);
  return res;
}

// Highest level whose atoms fit the cell budget.
std::size_t cell_top(const CellAlgebra& cells, std::size_t limit, const Budget& budget) {
  std::size_t n = 0;
  for (std::size_t l = 1; l <= limit; ++l) {
    const QuotientTower& t = cells.tower();
    if (t.enumerable_size(l) > budget.cells) break;
    const BigInt atoms = t.domain_size(l) * (1 + j_size(t, l));
    if (atoms > static_cast<unsigned long>(budget.cells)) break;
    n = l;
  }
  return n;
}

CheckResult check_containings(const VerifyContext& ctx) {
  CellAlgebra cells(ctx.skel, ctx.budget);
  const std::size_t top = cell_top(cells, ctx.top(), ctx.budget);
  const std::size_t labels = enumerable_top(ctx.skel->tower(), ctx.skel->depth(), 4096);
  return containings_check(cells, top, labels);
}

CheckResult check_z_identity(const VerifyContext& ctx) {
  CellAlgebra cells(ctx.skel, ctx.budget);
  return z_identity_check(cells, cell_top(cells, ctx.top(), ctx.budget));
}

CheckResult check_at_least(const VerifyContext& ctx) {
  CellAlgebra cells(ctx.skel, ctx.budget);
  const std::size_t top = cell_top(cells, ctx.top(), ctx.budget);
  const std::size_t labels = enumerable_top(ctx.skel->tower(), ctx.skel->depth(), 4096);
  CheckResult res = at_least_check(cells, top, labels);
  if (!res.failed() && ctx.skel->tower().config().tail.kind != TailSpec::Kind::None) {
    const DensityReport rep = regularity_verdict(ctx.skel->tower());
    if (rep.verdict != Verdict::Inconclusive) {
      const Limit01 lim = limit_01(*ctx.skel, rep);
      const Rational lo = lim.zero.lo + lim.one.lo, hi = lim.zero.hi + lim.one.hi;
      if (lo > 1 || hi < 1) res.fail("enclosures of mu([0]) and mu([1]) cannot sum to 1");
      res.witnesses.push_back("mu([0]) in [" + to_fraction_string(lim.zero.lo) + ", " + to_fraction_string(lim.zero.hi) +
                              "], mu([1]) in [" + to_fraction_string(lim.one.lo) + ", " + to_fraction_string(lim.one.hi) + "]");
    }
  }
  return res;
}

CheckResult check_an_det(const VerifyContext& ctx) {
  CheckResult res;
  const ToeplitzSkeleton& skel = *ctx.skel;
  const std::size_t top = ctx.top();
  for (std::size_t n = 1; n <= top && !res.failed(); ++n) {
    const ACounts c = a_counts(skel, n);
    if (auto e = a_counts_enumerated(skel, n, ctx.budget)) {
      if (e->a0 != c.a0 || e->a1 != c.a1) {
        res.fail("a-counts at n=" + std::to_string(n) + ": recursion (" + c.a0.get_str() + "," + c.a1.get_str() +
                 "), period sets (" + e->a0.get_str() + "," + e->a1.get_str() + ")");
        break;
      }
    }
    CheckResult part = an_det_from_counts(n, c);
    absorb(res, part);
    res.witnesses.push_back(part.witnesses.front());
  }
  if (top == 0) res.inconclusive("needs depth >= 1");
  res.scope = "n in [1," + std::to_string(top) + "]";
  return res;
}

CheckResult check_uns_bound(const VerifyContext& ctx) {
  CheckResult res;
  const ToeplitzSkeleton& skel = *ctx.skel;
  const QuotientTower& t = skel.tower();
  const auto M = tower_M(skel);
  auto usable = [&](std::size_t n, std::size_t m) {
    return m + 1 <= skel.depth() && t.enumerable_size(m) <= ctx.budget.enumeration &&
           static_cast<double>(t.enumerable_size(m)) * static_cast<double>(t.enumerable_size(n + 1)) <= 64.0 * ctx.budget.enumeration;
  };
  std::size_t bound_pairs = 0;
  bool all_strict = true;
  for (std::size_t a = 0; a < M.size() && !res.failed(); ++a) {
    for (std::size_t b = a + 1; b < M.size() && !res.failed(); ++b) {
      const std::size_t n = M[a], m = M[b];
      if (n > ctx.top() || m <= n + 2 || !usable(n, m)) continue;
      ++bound_pairs;
      const PeriodicMeasure mu(ctx.skel, m, ctx.budget);
      const Rational got = mu_U(mu, skel, n, ctx.budget);
      const Rational counted = make_rational(static_cast<unsigned long>(good_relation(t, n, m, ctx.budget).count()), t.domain_size(m));
      const Rational bound = uns_lower_bound(t, n, m);
      if (got < counted || counted < bound) {
        res.fail("(n,m)=(" + std::to_string(n) + "," + std::to_string(m) + "): mu_m(U_n)=" + to_fraction_string(got) +
                 ", N/|D_m|=" + to_fraction_string(counted) + ", bound " + to_fraction_string(bound));
      }
      if (!(got > bound)) all_strict = false;
      res.witnesses.push_back("(n,m)=(" + std::to_string(n) + "," + std::to_string(m) + "): mu_m(U_n) = " +
                              to_fraction_string(got) + " >= N_{m,n}/|D_m| = " + to_fraction_string(counted) +
                              " >= " + to_fraction_string(bound));
    }
  }
  if (bound_pairs > 0) {
    res.scope = std::to_string(bound_pairs) + " pairs n < m in M with m > n+2 and m < depth";
    if (!res.failed()) res.notes.push_back(all_strict ? "all inequalities strict" : "some inequality holds with equality");
    return res;
  }
  // No pair of subsequence levels fits the depth: finite shadow with n in M and any computed m.
  std::size_t shadow = 0;
  for (std::size_t n : M) {
    if (n > ctx.top()) break;
    for (std::size_t m = n + 2; m < skel.depth(); ++m) {
      if (!usable(n, m)) break;
      ++shadow;
      const PeriodicMeasure mu(ctx.skel, m, ctx.budget);
      const Rational got = mu_U(mu, skel, n, ctx.budget);
      const Rational bound = uns_lower_bound(t, n, m);
      res.witnesses.push_back("(n,m)=(" + std::to_string(n) + "," + std::to_string(m) + "): mu_m(U_n) = " +
                              to_fraction_string(got) + (got > bound ? " > " : got == bound ? " = " : " < ") +
                              to_fraction_string(bound));
      if (got < bound) res.inconclusive("shadow pair (" + std::to_string(n) + "," + std::to_string(m) + ") is below the bound");
    }
  }
  if (shadow == 0) res.inconclusive("no level pair within depth");
  res.scope = "finite shadow: no two subsequence levels within depth; n in M, n+2 <= m < depth (" +
              std::to_string(shadow) + " pairs)";
  return res;
}

CheckResult check_measure_1_trend(const VerifyContext& ctx) {
  CheckResult res;
  const ToeplitzSkeleton& skel = *ctx.skel;
  const QuotientTower& t = skel.tower();
  res.scope = "finite shadow: certified lower bounds for n in [1," + std::to_string(t.depth() == 0 ? 0 : t.depth() - 1) + "]";
  std::vector<std::size_t> bad;
  for (std::size_t k = 0; k < skel.linking_ok().size(); ++k) {
    if (skel.linking_ok()[k] && !*skel.linking_ok()[k]) bad.push_back(k);
  }
  if (t.config().tail.kind == TailSpec::Kind::Repeat) {
    res.vacate("divergent L: the products tend to 0 and the bound's hypotheses do not hold");
    return res;
  }
  if (!bad.empty()) {
    res.vacate("linking condition fails at blocks " + levels_text(bad));
    return res;
  }
  std::optional<Rational> prev;
  for (std::size_t n = 1; n + 1 <= t.depth(); ++n) {
    auto b = z_measure_lower_bound(t, n);
    if (!b) {
      res.inconclusive("no declared tail bounds the remaining product");
      return res;
    }
    res.witnesses.push_back("n=" + std::to_string(n) + ": " + to_fraction_string(*b) + " (" + to_decimal_string(*b, 9) + ")");
    if (prev && *b < *prev) res.fail("bound at n=" + std::to_string(n) + " drops below the bound at n-1");
    prev = b;
  }
  if (!prev) res.inconclusive("needs at least two tower levels");
  return res;
}

CheckResult check_pimap(const VerifyContext& ctx) {
  const std::size_t top = enumerable_top(ctx.skel->tower(), ctx.top(), 729);
  return pimap_check(ctx.skel, top, 32, ctx.seed, ctx.budget);
}

CheckResult check_no_empty(const VerifyContext& ctx) {
  CheckResult res;
  const DensityReport rep = regularity_verdict(ctx.skel->tower());
  res.scope = "density data over " + std::to_string(rep.levels) + " tower levels";
  res.witnesses.push_back("verdict " + verdict_name(rep.verdict) + ", d in [" + to_fraction_string(rep.d_interval.lo) + ", " +
                          to_fraction_string(rep.d_interval.hi) + "]");
  if (rep.verdict == Verdict::Regular) {
    res.vacate("regular tower: the statement assumes a convergent L with 1 - exp(-2L) < 1/4");
  } else if (rep.verdict == Verdict::Inconclusive) {
    res.inconclusive(rep.explanation);
  } else if (!rep.quarter_condition) {
    res.vacate("1 - exp(-2L) < 1/4 is not certified for this tower");
  } else {
    if (!(rep.d_interval.hi < Rational(1, 4))) res.fail("d upper bound " + to_fraction_string(rep.d_interval.hi) + " is not below 1/4");
    if (!rep.d_below_half) res.fail("d < 1 - d is not certified");
    res.witnesses.push_back("exp(-2L) >= " + to_decimal_string(rep.exp_neg_2L->lo, 9) + " > 3/4");
  }
  return res;
}

}  // namespace

const std::vector<CheckInfo>& check_registry() {
  static const std::vector<CheckInfo> reg = {
      {"decom", "nested fundamental domains tile each other", check_decom},
      {"j-recursion", "J(n) equals the union of gamma*J(n-1)", check_j_recursion},
      {"per-eq", "Per(eta,Gamma_n) is the union of J(i)Gamma_{i+1}, i < n", check_per_eq},
      {"j-sub", "J(n) inside Per(eta,Gamma_{n+1}) \\ Per(eta,Gamma_n)", check_j_sub},
      {"essential", "Gamma_n is an essential group of periods", check_essential},
      {"periodo1", "Per(eta,Gamma_s,1) is Gamma_1 plus the planted cosets", check_periodo1},
      {"auxiliar", "gamma*J(i) lies in a single J(l)Gamma_{l+1}", check_auxiliar},
      {"regular-eta", "1 - d_{n+1} = (1 - 1/|D_1|) prod (1 - |D_j|/|D_{j+1}|)", check_regular_eta},
      {"good-relation", "N_{m,n} meets the counting bound and gamma*D_{n+1} stays outside", check_good_relation},
      {"good-patches", "relation plus Patching puts sigma^{gamma_0^-1} eta in U_n", check_good_patches},
      {"t1t2", "eta(gamma_0 gamma u) = eta(u) between subsequence levels", check_t1t2},
      {"partitions-c", "at most one 1 on each translate gamma*J(k)", check_partitions_c},
      {"linking", "linking condition per block", check_linking},
      {"good-ds", "every w in D_{n_k-1} \\ {1} has a witness g_w", check_good_ds},
      {"u-in-y", "orbit points in U_{n_k} lie in Y_{n_k}", check_u_in_y},
      {"y-in-z", "D_{n+1}-shifts of Y_n lie in Z_n", check_y_in_z},
      {"containings", "refinement inclusions (1)-(5) of the partitions", check_containings},
      {"z-identity", "Z_n = Z_{n+1} u W_{n+1} u shifted C^1_{n+1} on M, inclusion elsewhere", check_z_identity},
      {"an-det", "det A_n = |D_n|", check_an_det},
      {"uns-bound", "mu_m(U_n) >= N_{m,n}/|D_m| >= the product bound", check_uns_bound},
      {"measure-1-trend", "lower bounds on mu(Z_n) are nondecreasing", check_measure_1_trend},
      {"pimap", "pi by reduction matches C_n membership and is equivariant", check_pimap},
      {"at-least", "[0] and [1] as cell unions with coefficient matrix A_n", check_at_least},
      {"no-empty", "irregular with d < 1 - d", check_no_empty},
  };
  return reg;
}

std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const auto& c : check_registry()) out.push_back(c.name);
  return out;
}

CheckResult run_check(const VerifyContext& ctx, const std::string& name) {
  const auto& reg = check_registry();
  auto it = std::find_if(reg.begin(), reg.end(), [&](const CheckInfo& c) { return c.name == name; });
  if (it == reg.end()) {
    std::string known;
    for (const auto& c : reg) known += (known.empty() ? "" : ", ") + c.name;
    throw UnknownCheck("unknown check '" + name + "' (known: " + known + ")");
  }
  const auto start = std::chrono::steady_clock::now();
  CheckResult res;
  try {
    res = it->run(ctx);
  } catch (const DepthExceeded& e) {
    res = CheckResult{};
    res.inconclusive(std::string("depth: ") + e.what());
  } catch (const BudgetExceeded& e) {
    res = CheckResult{};
    res.inconclusive(std::string("budget: ") + e.what());
  } catch (const NonAbelianUnsupported& e) {
    res = CheckResult{};
    res.inconclusive(e.what());
  }
  res.name = name;
  res.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return res;
}

SuiteReport run_all(const VerifyContext& ctx) {
  SuiteReport r;
  for (const auto& c : check_registry()) {
    r.results.push_back(run_check(ctx, c.name));
    switch (r.results.back().status) {
      case CheckStatus::Pass: ++r.passed; break;
      case CheckStatus::Fail: ++r.failed; break;
      case CheckStatus::Inconclusive: ++r.inconclusive; break;
      case CheckStatus::Vacated: ++r.vacated; break;
    }
  }
  return r;
}

nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.results) checks.push_back(to_json(c));
  return {{"checks", checks},
          {"summary", {{"pass", r.passed}, {"fail", r.failed}, {"inconclusive", r.inconclusive}, {"vacated", r.vacated}}}};
}

}  // namespace toeplitz
