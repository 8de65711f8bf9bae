#include "toeplitz/density.hpp"

#include <algorithm>

#include "toeplitz/errors.hpp"

namespace toeplitz {

nlohmann::json interval_json(const Interval& i) {
  return {{"lo", rational_json(i.lo)}, {"hi", rational_json(i.hi)}, {"width", to_double(i.width())}};
}

std::optional<Rational> d_by_enumeration(const ToeplitzSkeleton& skel, std::size_t n, const Budget& budget) {
  const QuotientTower& t = skel.tower();
  if (n > skel.depth() || t.enumerable_size(n) > budget.enumeration) return std::nullopt;
  const std::uint64_t size = t.enumerable_size(n);
  std::uint64_t periodic = 0;
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
      if (lvl >= 0 && static_cast<std::size_t>(lvl) < n) ++periodic;
      for (std::size_t a = 0; a < dim; ++a) {
        if (++c[a] < hi[a]) break;
        c[a] = lo[a];
      }
    }
  } else {
    for (std::uint64_t idx = 0; idx < size; ++idx) {
      auto lvl = skel.level_of(t.element_at(n, idx));
      if (lvl && *lvl < n) ++periodic;
    }
  }
  return make_rational(from_uint64(periodic), from_uint64(size));
}

Rational d_by_recursion(const QuotientTower& t, std::size_t n) {
  t.check_level(n);
  BigInt count = 0;
  for (std::size_t i = 0; i < n; ++i) count += j_size(t, i) * (t.domain_size(n) / t.domain_size(i + 1));
  return make_rational(count, t.domain_size(n));
}

Rational d_closed_form(const QuotientTower& t, std::size_t n) {
  t.check_level(n);
  if (n == 0) return Rational(0);
  Rational p = 1 - make_rational(1, t.domain_size(1));
  for (std::size_t j = 1; j + 1 <= n; ++j) p *= 1 - make_rational(t.domain_size(j), t.domain_size(j + 1));
  return 1 - p;
}

DensityMethods d_methods(const ToeplitzSkeleton& skel, std::size_t n, const Budget& budget) {
  DensityMethods m;
  m.enumeration = d_by_enumeration(skel, n, budget);
  m.recursion = d_by_recursion(skel.tower(), n);
  m.closed_form = d_closed_form(skel.tower(), n);
  m.agree = m.recursion == m.closed_form && (!m.enumeration || *m.enumeration == m.recursion);
  return m;
}

Rational d_exact(const ToeplitzSkeleton& skel, std::size_t n, const Budget& budget) {
  DensityMethods m = d_methods(skel, n, budget);
  if (!m.agree) {
    throw Inconsistency("density methods disagree at level " + std::to_string(n) + ": recursion " +
                        to_fraction_string(m.recursion) + ", closed form " + to_fraction_string(m.closed_form) +
                        (m.enumeration ? ", enumeration " + to_fraction_string(*m.enumeration) : std::string()));
  }
  return m.recursion;
}

std::string tail_kind_name(TailKind k) {
  switch (k) {
    case TailKind::Bounded:
      return "bounded";
    case TailKind::Unbounded:
      return "unbounded";
    case TailKind::Unknown:
      return "unknown";
  }
  return "unknown";
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Regular:
      return "Regular";
    case Verdict::Irregular:
      return "Irregular";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

// |D_j| / |D_{j+1}| for 1 <= j < depth
Rational l_term(const QuotientTower& t, std::size_t j) { return make_rational(t.domain_size(j), t.domain_size(j + 1)); }

}  // namespace

LSeries l_series(const QuotientTower& t, std::size_t terms) {
  if (t.depth() == 0) throw DepthExceeded("L needs at least one level");
  const std::size_t known = t.depth() - 1;  // configured terms j = 1..depth-1
  if (terms > known) throw DepthExceeded("only " + std::to_string(known) + " terms of L are configured");
  LSeries s;
  s.terms = terms;
  s.partial = make_rational(1, t.domain_size(1));
  for (std::size_t j = 1; j <= terms; ++j) s.partial += l_term(t, j);
  const TailSpec& tail = t.config().tail;
  if (tail.kind == TailSpec::Kind::Repeat) {
    s.tail = TailKind::Unbounded;
  } else if (tail.kind == TailSpec::Kind::Geometric && known >= 1) {
    s.tail = TailKind::Bounded;
    s.tail_bound = 0;
    for (std::size_t j = terms + 1; j <= known; ++j) s.tail_bound += l_term(t, j);
    const Rational& r = tail.ratio;
    s.tail_bound += l_term(t, known) * r / (1 - r);
  }
  return s;
}

Interval exp_neg_enclosure(const Rational& x, const Rational& width) {
  if (x < 0) throw ConfigError("exp_neg_enclosure expects x >= 0");
  // S_N = sum_{k<=N} (-x)^k/k!; once |term| decreases, odd N gives lower and even N upper bounds.
  Rational term = 1;
  Rational sum = 1;
  Rational prev_sum = sum;
  for (long k = 1;; ++k) {
    term *= -x / Rational(k);
    prev_sum = sum;
    sum += term;
    const bool decreasing = Rational(k + 1) > x;
    if (decreasing && abs(term) < width && k >= 1) {
      Interval iv;
      iv.lo = std::min(sum, prev_sum);
      iv.hi = std::max(sum, prev_sum);
      if (iv.lo < 0) iv.lo = 0;
      return iv;
    }
    if (k > 100000) throw Inconsistency("exp enclosure did not converge");
  }
}

DensityReport regularity_verdict(const QuotientTower& t, std::optional<std::size_t> levels) {
  DensityReport r;
  r.levels = levels.value_or(t.depth());
  if (r.levels == 0 || r.levels > t.depth()) throw DepthExceeded("density report needs 1 <= levels <= tower depth");
  for (std::size_t n = 1; n <= r.levels; ++n) r.d_seq.push_back(d_closed_form(t, n));
  r.product_partial = 1 - r.d_seq.back();
  r.L = l_series(t, t.depth() - 1);
  const Rational d_top = d_closed_form(t, t.depth());
  const TailSpec& tail = t.config().tail;
  if (tail.kind == TailSpec::Kind::Repeat) {
    r.verdict = Verdict::Regular;
    r.d_interval = Interval{1, 1};
    r.explanation = "configured indices repeat forever, so every further term of L is bounded below and L diverges";
    return r;
  }
  if (tail.kind == TailSpec::Kind::None || r.L.tail != TailKind::Bounded) {
    r.verdict = Verdict::Inconclusive;
    r.d_interval = Interval{r.d_seq.back(), 1};
    r.explanation = t.depth() < 2 ? "a single configured level and no declared tail: convergence of L is undecided"
                                  : "no tail behaviour declared for the tower: convergence of L is undecided";
    return r;
  }
  // L <= partial + tail; exp(-2L) >= exp(-2 * that)
  const Rational l_upper = r.L.partial + r.L.tail_bound;
  r.exp_neg_2L = exp_neg_enclosure(2 * l_upper, Rational(1, 1000000000));
  // terms beyond the configured levels
  const std::size_t known = t.depth() - 1;
  const Rational beyond = known >= 1 ? l_term(t, known) * tail.ratio / (1 - tail.ratio) : Rational(0);
  const Rational via_exp = 1 - r.exp_neg_2L->lo;
  const Rational via_product = beyond < 1 ? 1 - (1 - d_top) * (1 - beyond) : Rational(1);
  r.d_interval = Interval{d_top, std::min(via_exp, via_product)};
  r.verdict = r.d_interval.hi < 1 ? Verdict::Irregular : Verdict::Inconclusive;
  r.quarter_condition = r.exp_neg_2L->lo > Rational(3, 4);
  r.d_below_half = r.d_interval.hi < Rational(1, 2);
  r.explanation = r.verdict == Verdict::Irregular
                      ? "L converges under the declared geometric tail; d is bounded away from 1"
                      : "declared tail too weak to bound d below 1";
  return r;
}

nlohmann::json to_json(const DensityReport& r) {
  nlohmann::json j;
  j["levels"] = r.levels;
  nlohmann::json seq = nlohmann::json::array();
  for (const auto& d : r.d_seq) seq.push_back(rational_json(d));
  j["d_seq"] = seq;
  j["L_partial"] = rational_json(r.L.partial);
  j["L_terms"] = r.L.terms;
  j["L_tail"] = tail_kind_name(r.L.tail);
  if (r.L.tail == TailKind::Bounded) j["L_tail_bound"] = rational_json(r.L.tail_bound);
  j["product_partial"] = rational_json(r.product_partial);
  j["d_interval"] = interval_json(r.d_interval);
  if (r.exp_neg_2L) j["exp_neg_2L"] = interval_json(*r.exp_neg_2L);
  j["quarter_condition"] = r.quarter_condition;
  j["d_below_half"] = r.d_below_half;
  j["verdict"] = verdict_name(r.verdict);
  j["explanation"] = r.explanation;
  return j;
}

}  // namespace toeplitz
