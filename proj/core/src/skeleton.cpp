#include "toeplitz/skeleton.hpp"

#include <algorithm>
#include <unordered_set>

#include "toeplitz/errors.hpp"

namespace toeplitz {

namespace {

void require_enumerable(const QuotientTower& t, std::size_t n, const Budget& budget) {
  const std::uint64_t size = t.enumerable_size(n);
  if (size > budget.enumeration) {
    throw BudgetExceeded("|D_" + std::to_string(n) + "| = " + std::to_string(size) + " exceeds the enumeration budget " +
                         std::to_string(budget.enumeration) + "; use j_size");
  }
}

}  // namespace

JSet j_set(const QuotientTower& t, std::size_t n, const Budget& budget) {
  t.check_level(n);
  require_enumerable(t, n, budget);
  std::vector<std::unordered_set<std::uint64_t>> members(n + 1);
  JSet current{0, {t.identity()}};
  members[0].insert(t.index_of(t.identity(), 0));
  for (std::size_t lvl = 1; lvl <= n; ++lvl) {
    current = JSet{lvl, {}};
    const std::uint64_t size = t.enumerable_size(lvl);
    for (std::uint64_t idx = 0; idx < size; ++idx) {
      Element x = t.element_at(lvl, idx);
      bool covered = false;
      for (std::size_t i = 0; i < lvl && !covered; ++i) {
        Element r = t.reduce(x, i + 1);
        covered = t.in_domain(r, i) && members[i].count(t.index_of(r, i)) > 0;
      }
      if (!covered) {
        members[lvl].insert(idx);
        current.elements.push_back(std::move(x));
      }
    }
  }
  return current;
}

JSet j_recursion_step(const QuotientTower& t, const JSet& prev, const Budget& budget) {
  const std::size_t n = prev.level + 1;
  t.check_level(n);
  require_enumerable(t, n, budget);
  std::vector<std::pair<std::uint64_t, Element>> out;
  for (const Element& gamma : t.subgroup_domain(prev.level, n)) {
    if (t.is_identity(gamma)) continue;
    for (const Element& j : prev.elements) {
      Element p = t.mul(gamma, j);
      const std::uint64_t idx = t.index_of(p, n);  // throws NotInDomain if the tiling is broken
      out.emplace_back(idx, std::move(p));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  JSet r{n, {}};
  for (auto& [idx, e] : out) r.elements.push_back(std::move(e));
  return r;
}

JSet j_set_recursive(const QuotientTower& t, std::size_t n, const Budget& budget) {
  t.check_level(n);
  if (n == 0) return JSet{0, {t.identity()}};
  require_enumerable(t, n, budget);
  // level 1 from the definition: D_1 minus Gamma_1
  JSet current{1, {}};
  const std::uint64_t size1 = t.enumerable_size(1);
  for (std::uint64_t idx = 0; idx < size1; ++idx) {
    Element x = t.element_at(1, idx);
    if (!t.in_subgroup(x, 1)) current.elements.push_back(std::move(x));
  }
  for (std::size_t lvl = 2; lvl <= n; ++lvl) current = j_recursion_step(t, current, budget);
  return current;
}

BigInt j_size(const QuotientTower& t, std::size_t n) {
  t.check_level(n);
  BigInt s = 1;
  for (std::size_t i = 1; i <= n; ++i) s *= t.level_index(i) - 1;
  return s;
}

std::optional<std::size_t> covering_level(const QuotientTower& t, const Element& g, std::size_t max_level) {
  const std::size_t top = std::min(max_level, t.depth());
  for (std::size_t i = 0; i < top; ++i) {
    if (t.in_domain(t.reduce(g, i + 1), i)) return i;
  }
  return std::nullopt;
}

StepPlan ToeplitzSkeleton::plan(std::size_t step) const {
  if (step == 0) throw DepthExceeded("construction steps start at 1");
  const BigInt s = static_cast<unsigned long>(step - 1);
  BigInt prev = 0;  // m_{-1}
  for (std::size_t k = 0; k < m_k_.size(); ++k) {
    if (s >= prev && s < m_k_[k]) {
      StepPlan p;
      p.step = step;
      p.block = k;
      p.plants = s + 1 < m_k_[k];
      p.slot = p.plants ? static_cast<std::size_t>(BigInt(s - prev + 1).get_ui()) : 0;
      return p;
    }
    prev = m_k_[k];
  }
  throw DepthExceeded("step " + std::to_string(step) + " lies beyond the known block boundaries");
}

const Element* ToeplitzSkeleton::planted(std::size_t step) const {
  if (step == 0 || step > depth_) throw DepthExceeded("step " + std::to_string(step) + " was not constructed");
  return planted_[step] ? &*planted_[step] : nullptr;
}

bool ToeplitzSkeleton::block_completed(std::size_t k) const {
  return k < m_k_.size() && m_k_[k] <= BigInt(static_cast<unsigned long>(depth_));
}

std::vector<std::size_t> ToeplitzSkeleton::subsequence() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; block_completed(k); ++k) out.push_back(static_cast<std::size_t>(m_k_[k].get_ui()) - 1);
  return out;
}

bool ToeplitzSkeleton::in_subsequence(std::size_t n) const {
  for (std::size_t k = 0; k < m_k_.size(); ++k) {
    if (m_k_[k] == BigInt(static_cast<unsigned long>(n + 1))) return true;
    if (m_k_[k] > BigInt(static_cast<unsigned long>(n + 1))) break;
  }
  return false;
}

std::optional<std::size_t> ToeplitzSkeleton::level_of(const Element& g) const {
  tower_->check_element(g);
  return covering_level(*tower_, g, depth_);
}

std::optional<int> ToeplitzSkeleton::eval(const Element& g) const {
  auto lvl = level_of(g);
  if (!lvl) return std::nullopt;
  const std::size_t step = *lvl + 1;
  const Element* h = planted(step);
  if (!h) return 0;
  return tower_->reduce(g, step) == *h ? 1 : 0;
}

int ToeplitzSkeleton::level_of_fast(const std::int64_t* c) const {
  const QuotientTower& t = *tower_;
  const std::size_t dim = t.dim();
  for (std::size_t i = 0; i < depth_; ++i) {
    bool inside = true;
    for (std::size_t a = 0; a < dim && inside; ++a) inside = t.fast_in_domain(t.fast_reduce(c[a], i + 1, a), i, a);
    if (inside) return static_cast<int>(i);
  }
  return -1;
}

int ToeplitzSkeleton::eval_fast(const std::int64_t* c) const {
  const int lvl = level_of_fast(c);
  if (lvl < 0) return -1;
  const std::size_t step = static_cast<std::size_t>(lvl) + 1;
  const auto& h = planted_fast_[step];
  if (h.empty()) return 0;
  const QuotientTower& t = *tower_;
  for (std::size_t a = 0; a < t.dim(); ++a) {
    if (t.fast_reduce(c[a], step, a) != h[a]) return 0;
  }
  return 1;
}

nlohmann::json ToeplitzSkeleton::to_json() const {
  nlohmann::json j;
  j["tower"] = toeplitz::to_json(tower_->config());
  j["depth"] = depth_;
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : h_records_) {
    recs.push_back({{"step", r.step}, {"block", r.block}, {"slot", r.slot}, {"h", r.h.to_string()}, {"target", r.target.to_string()}});
  }
  j["h_records"] = recs;
  std::vector<std::string> mo, mk;
  for (const auto& v : m_of_) mo.push_back(v.get_str());
  for (const auto& v : m_k_) mk.push_back(v.get_str());
  j["m_of"] = mo;
  j["m_k"] = mk;
  nlohmann::json link = nlohmann::json::array();
  for (const auto& l : linking_ok_) link.push_back(l ? nlohmann::json(*l) : nlohmann::json(nullptr));
  j["linking_ok"] = link;
  j["warnings"] = warnings_;
  return j;
}

namespace {

// s'-th (1-based) element of J(k) in enumeration order.
Element j_element(const QuotientTower& t, std::size_t k, std::size_t slot, const Budget& budget) {
  if (k == 0) return t.identity();
  const std::uint64_t size = t.enumerable_size(k);
  std::size_t seen = 0;
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    if (idx >= budget.enumeration) break;
    Element x = t.element_at(k, idx);
    if (covering_level(t, x, k + 1) == k && ++seen == slot) return x;
  }
  throw BudgetExceeded("could not locate element " + std::to_string(slot) + " of J(" + std::to_string(k) + ")");
}

}  // namespace

SkeletonPtr build_skeleton(TowerPtr tower, std::size_t depth, const Budget& budget) {
  if (!tower) throw ConfigError("null tower");
  const QuotientTower& t = *tower;
  if (depth + 1 > t.depth()) {
    throw DepthExceeded("skeleton depth " + std::to_string(depth) + " needs a tower of depth >= " +
                        std::to_string(depth + 1) + " (tower has " + std::to_string(t.depth()) + ")");
  }
  std::shared_ptr<ToeplitzSkeleton> sk(new ToeplitzSkeleton());
  sk->tower_ = tower;
  sk->depth_ = depth;
  BigInt acc = 0;
  for (std::size_t k = 0; k <= t.depth(); ++k) {
    sk->m_of_.push_back(j_size(t, k));
    acc += sk->m_of_.back();
    sk->m_k_.push_back(BigInt(static_cast<unsigned long>(1 + k)) + acc);
  }
  sk->planted_.assign(depth + 1, std::nullopt);
  for (std::size_t step = 1; step <= depth; ++step) {
    const StepPlan p = sk->plan(step);
    if (!p.plants) continue;
    const std::size_t s = step - 1;
    const Element target = j_element(t, p.block, p.slot, budget);
    const std::uint64_t size = t.enumerable_size(s);
    std::optional<Element> chosen;
    for (std::uint64_t idx = 0; idx < size && !chosen; ++idx) {
      if (idx >= budget.enumeration) {
        throw BudgetExceeded("search for h at step " + std::to_string(step) + " exceeded the enumeration budget");
      }
      Element x = t.element_at(s, idx);
      if (covering_level(t, x, s + 1) == s && t.reduce(x, p.block) == target) chosen = std::move(x);
    }
    if (!chosen) {
      throw EmptySlot("J(" + std::to_string(s) + ") has no element in " + target.to_string() + "*Gamma_" +
                      std::to_string(p.block) + " (step " + std::to_string(step) + ")");
    }
    sk->planted_[step] = *chosen;
    if (step >= 2) sk->h_records_.push_back(HRecord{step, p.block, p.slot, *chosen, target});
  }
  // condition (Linking) for every block whose last planted step and D_{m_k} are available
  for (std::size_t k = 0; k < sk->m_k_.size(); ++k) {
    const BigInt& mk = sk->m_k_[k];
    if (mk > BigInt(static_cast<unsigned long>(t.depth())) || mk - 1 > BigInt(static_cast<unsigned long>(depth))) break;
    const std::size_t m = static_cast<std::size_t>(mk.get_ui());
    const Element& h = *sk->planted_[m - 1];
    bool ok = true;
    for (const Element& v : t.subgroup_domain(m - 2, m - 1)) {
      if (t.is_identity(v)) continue;
      Element w = t.mul(t.inv(v), h);
      if (!t.in_domain(w, m)) {
        ok = false;
        sk->warnings_.push_back("linking fails for block " + std::to_string(k) + ": v=" + v.to_string() + " gives v^-1*h=" +
                                w.to_string() + " outside D_" + std::to_string(m));
        break;
      }
    }
    sk->linking_ok_.push_back(ok);
  }
  // 64-bit evaluation path
  sk->fast_ = t.fast_ok(depth);
  if (sk->fast_) {
    sk->planted_fast_.assign(depth + 1, {});
    for (std::size_t step = 1; step <= depth; ++step) {
      if (!sk->planted_[step]) continue;
      for (const auto& c : sk->planted_[step]->coords()) sk->planted_fast_[step].push_back(to_int64(c));
    }
  }
  return sk;
}

SkeletonPtr load_skeleton(const nlohmann::json& j, const Budget& budget) {
  try {
    TowerPtr tower = build_tower(parse_tower_config(j.at("tower")));
    SkeletonPtr sk = build_skeleton(tower, j.at("depth").get<std::size_t>(), budget);
    if (j.contains("h_records")) {
      const auto& recs = j["h_records"];
      if (recs.size() != sk->h_records().size()) throw ConfigError("skeleton file records disagree with the rebuild");
      for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& r = sk->h_records()[i];
        if (recs[i].at("step").get<std::size_t>() != r.step ||
            parse_element(recs[i].at("h").get<std::string>()) != r.h) {
          throw ConfigError("skeleton file record " + std::to_string(i) + " disagrees with the rebuild");
        }
      }
    }
    return sk;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed skeleton file: ") + e.what());
  }
}

}  // namespace toeplitz
