#include "toeplitz/factor.hpp"

#include <random>
#include <set>

#include "toeplitz/density.hpp"
#include "toeplitz/errors.hpp"

namespace toeplitz {

bool coherent(const QuotientTower& t, const OdometerPoint& p) {
  if (p.cosets.size() != p.depth) return false;
  for (std::size_t n = 1; n <= p.depth; ++n) {
    if (!t.in_domain(p.cosets[n - 1], n)) return false;
    if (n > 1 && t.reduce(p.cosets[n - 1], n - 1) != p.cosets[n - 2]) return false;
  }
  return true;
}

OdometerPoint odometer_act(const QuotientTower& t, const Element& g, const OdometerPoint& p) {
  OdometerPoint out{p.depth, {}};
  for (std::size_t n = 1; n <= p.depth; ++n) out.cosets.push_back(t.reduce(t.mul(g, p.cosets[n - 1]), n));
  return out;
}

OdometerPoint pi_of_orbit(const ToeplitzSkeleton& skel, const Element& v, std::size_t depth) {
  if (depth > skel.depth()) {
    throw DepthExceeded("pi at depth " + std::to_string(depth) + " exceeds skeleton depth " + std::to_string(skel.depth()));
  }
  const QuotientTower& t = skel.tower();
  t.check_element(v);
  OdometerPoint p{depth, {}};
  for (std::size_t n = 1; n <= depth; ++n) p.cosets.push_back(t.reduce(v, n));
  return p;
}

OdometerPoint pi_by_membership(const OrbitOracle& oracle, const Element& v, std::size_t depth, const Budget& budget) {
  const ToeplitzSkeleton& skel = oracle.skeleton();
  const QuotientTower& t = skel.tower();
  if (depth > skel.depth()) throw DepthExceeded("pi at depth " + std::to_string(depth) + " exceeds skeleton depth");
  OdometerPoint p{depth, {}};
  for (std::size_t n = 1; n <= depth; ++n) {
    const std::uint64_t size = t.enumerable_size(n);
    if (size > budget.enumeration) throw BudgetExceeded("|D_n| exceeds the enumeration budget");
    std::optional<Element> found;
    for (std::uint64_t i = 0; i < size; ++i) {
      const Element w = t.element_at(n, i);
      if (!*oracle.in_Cn(t.mul(v, t.inv(w)), n)) continue;
      if (found) {
        throw Inconsistency("orbit point of " + v.to_string() + " lies in two level-" + std::to_string(n) +
                            " translates of C_n: " + found->to_string() + " and " + w.to_string());
      }
      found = w;
    }
    if (!found) throw Inconsistency("orbit point of " + v.to_string() + " lies in no level-" + std::to_string(n) + " translate of C_n");
    p.cosets.push_back(*found);
  }
  return p;
}

Rational haar_cylinder(const QuotientTower& t, const Element& c, std::size_t n) {
  t.check_level(n);
  if (!t.in_domain(c, n)) throw NotInDomain(c.to_string() + " is not in D_" + std::to_string(n));
  return make_rational(1, t.domain_size(n));
}

Rational toeplitz_mass_estimate(const ToeplitzSkeleton& skel, std::size_t n, const Budget& budget) {
  if (auto e = d_by_enumeration(skel, n, budget)) return *e;
  if (n > skel.depth()) throw DepthExceeded("level " + std::to_string(n) + " is beyond the skeleton depth");
  return d_by_recursion(skel.tower(), n);
}

Rational pushforward_mass(const PeriodicMeasure& mu_m, const Element& c, std::size_t n, const Budget& budget) {
  const QuotientTower& t = mu_m.tower();
  const std::size_t m = mu_m.level();
  if (n > m) throw ConfigError("pushforward needs n <= m");
  if (!t.in_domain(c, n)) throw NotInDomain(c.to_string() + " is not in D_" + std::to_string(n));
  const std::uint64_t size = t.enumerable_size(m);
  if (size > budget.enumeration) throw BudgetExceeded("|D_m| exceeds the enumeration budget");
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < size; ++i) {
    if (t.reduce(t.element_at(m, i), n) == c) ++hits;
  }
  return make_rational(from_uint64(hits), from_uint64(size));
}

FiberProfile fiber_profile(const ToeplitzSkeleton& skel, std::size_t n, std::optional<std::size_t> window_level,
                           const Budget& budget) {
  const QuotientTower& t = skel.tower();
  FiberProfile prof;
  prof.level = n;
  prof.window_level = window_level.value_or(n);
  if (n + 1 > t.depth()) throw DepthExceeded("fibers at level n need D_{n+1}");
  const std::uint64_t size = t.enumerable_size(n);
  const std::uint64_t wsize = t.enumerable_size(prof.window_level);
  const auto gammas = t.subgroup_domain(n, n + 1);
  const double work = static_cast<double>(size) * static_cast<double>(gammas.size()) * static_cast<double>(wsize);
  if (work > static_cast<double>(budget.enumeration)) throw BudgetExceeded("fiber profile exceeds the enumeration budget");
  std::vector<Element> window;
  for (std::uint64_t i = 0; i < wsize; ++i) window.push_back(t.element_at(prof.window_level, i));
  for (std::uint64_t ci = 0; ci < size; ++ci) {
    FiberEntry e;
    e.coset = t.element_at(n, ci);
    e.forced = true;
    for (const Element& g : window) {
      auto lvl = skel.level_of(t.mul(e.coset, g));
      if (!lvl || *lvl >= n) {
        e.forced = false;
        break;
      }
    }
    std::set<std::vector<std::int8_t>> seen;
    for (const Element& gamma : gammas) {
      const Element v = t.mul(gamma, e.coset);
      std::vector<std::int8_t> pattern;
      pattern.reserve(window.size());
      bool undefined = false;
      for (const Element& g : window) {
        auto x = skel.eval(t.mul(v, g));
        if (!x) undefined = true;
        pattern.push_back(x ? static_cast<std::int8_t>(*x) : std::int8_t{2});
      }
      ++e.lifts;
      if (undefined) ++e.undefined;
      seen.insert(std::move(pattern));
    }
    e.windows = seen.size();
    prof.entries.push_back(std::move(e));
  }
  return prof;
}

CheckResult pimap_check(SkeletonPtr skel, std::size_t max_level, std::size_t samples, std::uint64_t seed,
                        const Budget& budget) {
  CheckResult res;
  res.name = "pimap";
  const QuotientTower& t = skel->tower();
  const std::size_t top = std::min(max_level, skel->depth());
  if (top == 0) {
    res.inconclusive("needs depth >= 1");
    return res;
  }
  OrbitOracle oracle(skel, budget);
  const std::uint64_t size = t.enumerable_size(top);
  std::vector<Element> reps;
  if (size <= 256) {
    for (std::uint64_t i = 0; i < size; ++i) reps.push_back(t.element_at(top, i));
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, size - 1);
    for (std::size_t i = 0; i < samples; ++i) reps.push_back(t.element_at(top, pick(rng)));
  }
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<std::uint64_t> pick(0, size - 1);
  for (const Element& v : reps) {
    const OdometerPoint p = pi_of_orbit(*skel, v, top);
    if (!coherent(t, p)) {
      res.fail("pi(" + v.to_string() + ") is not coherent");
      break;
    }
    const OdometerPoint q = pi_by_membership(oracle, v, top, budget);
    if (q.cosets != p.cosets) {
      res.fail("pi(" + v.to_string() + ") by reduction differs from the C_n membership search");
      break;
    }
    const Element g = t.element_at(top, pick(rng));
    if (pi_of_orbit(*skel, t.mul(g, v), top).cosets != odometer_act(t, g, p).cosets) {
      res.fail("pi is not equivariant at g=" + g.to_string() + ", v=" + v.to_string());
      break;
    }
  }
  if (!res.failed()) {
    res.witnesses.push_back(std::to_string(reps.size()) + " orbit points: reduction, membership search and equivariance agree");
  }
  if (!res.failed() && top >= 1 && top < skel->depth() && t.enumerable_size(top) <= (1u << 16)) {
    const PeriodicMeasure mu(skel, top, budget);
    for (std::size_t n = 1; n <= top && !res.failed(); ++n) {
      const std::uint64_t cs = t.enumerable_size(n);
      for (std::uint64_t i = 0; i < cs; ++i) {
        const Element c = t.element_at(n, i);
        if (pushforward_mass(mu, c, n, budget) != haar_cylinder(t, c, n)) {
          res.fail("pushforward of mu_" + std::to_string(top) + " gives the level-" + std::to_string(n) + " cylinder at " +
                   c.to_string() + " a mass other than 1/|D_n|");
          break;
        }
      }
    }
    if (!res.failed()) res.witnesses.push_back("pushforward of mu_" + std::to_string(top) + " is Haar on levels 1.." + std::to_string(top));
  }
  res.scope = "levels 1.." + std::to_string(top) + ", " + std::to_string(reps.size()) + " orbit points";
  return res;
}

}  // namespace toeplitz
