#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "toeplitz/density.hpp"
#include "toeplitz/errors.hpp"
#include "toeplitz/factor.hpp"
#include "toeplitz/measures.hpp"
#include "toeplitz/periods.hpp"
#include "toeplitz/presets.hpp"
#include "toeplitz/verify.hpp"

namespace toeplitz::cli {

namespace {

using nlohmann::json;

// Long fractions stay exact in the JSON output.
std::string num(const Rational& q) {
  const std::string f = to_fraction_string(q);
  if (f.size() > 48) return to_decimal_string(q, 12) + " (exact fraction in --json)";
  return f + " (" + to_decimal_string(q, 9) + ")";
}

bool text_enabled(const Source& s) { return s.json != "-"; }

void emit_json(const Source& s, const json& j) {
  if (s.json.empty()) return;
  if (s.json == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(s.json);
  if (!out) throw ConfigError("cannot write " + s.json);
  out << j.dump(2) << "\n";
}

const char* status_tag(CheckStatus st) {
  switch (st) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Inconclusive: return "INCONCLUSIVE";
    case CheckStatus::Vacated: return "VACATED";
  }
  return "?";
}

void print_check(std::ostream& os, const CheckResult& r) {
  os << std::left << std::setw(13) << status_tag(r.status) << std::setw(16) << r.name << r.scope << "  ["
     << std::fixed << std::setprecision(1) << r.millis << " ms]\n";
  if (r.counterexample) os << "    counterexample: " << *r.counterexample << "\n";
  for (const auto& n : r.notes) os << "    note: " << n << "\n";
}

std::string symbol_text(std::optional<int> v) { return v ? std::to_string(*v) : "?"; }

}  // namespace

TowerPtr load_tower(const Source& s) {
  if (!s.config.empty()) return build_tower(load_tower_config(s.config));
  return build_tower(preset_config(s.preset));
}

SkeletonPtr load_skeleton(const Source& s, const Budget& budget) {
  TowerPtr t = load_tower(s);
  if (t->depth() < 2) throw ConfigError("the tower needs at least two levels to carry a construction");
  std::size_t depth = s.depth.value_or(s.config.empty() ? preset_default_depth(s.preset) : 4);
  if (!s.depth) depth = std::min(depth, t->depth() - 1);
  return build_skeleton(t, depth, budget);
}

int tower_validate(const Source& s, const Budget& b, const TowerValidateArgs& a) {
  TowerPtr t = load_tower(s);
  const std::size_t levels = a.levels.value_or(t->depth());
  CheckResult r = validate_tower(*t, levels, b);
  if (text_enabled(s)) {
    std::cout << "tower: " << (t->config().name.empty() ? "custom" : t->config().name) << ", " << t->depth()
              << " levels, dimension " << t->dim() << "\n";
    for (std::size_t n = 1; n <= t->depth(); ++n) {
      std::cout << "  |D_" << n << "| = " << to_string(t->domain_size(n)) << "  index " << to_string(t->level_index(n)) << "\n";
    }
    print_check(std::cout, r);
  }
  json j = to_json(r);
  j["tower"] = to_json(t->config());
  emit_json(s, j);
  return r.failed() ? kExitFail : kExitOk;
}

int eta_build(const Source& s, const Budget& b, const EtaBuildArgs& a) {
  SkeletonPtr skel = load_skeleton(s, b);
  const ToeplitzSkeleton& k = *skel;
  if (text_enabled(s)) {
    std::cout << "depth " << k.depth() << " over a tower of " << k.tower().depth() << " levels\n";
    std::cout << "block ends m_k:";
    for (std::size_t i = 0; i < k.m_k().size(); ++i) std::cout << " " << to_string(k.m_k()[i]);
    std::cout << "\nsubsequence n_k within depth:";
    for (auto n : k.subsequence()) std::cout << " " << n;
    std::cout << "\nplanted elements (step, block, slot, h, target):\n";
    for (const HRecord& h : k.h_records()) {
      std::cout << "  " << h.step << " " << h.block << " " << h.slot << " " << h.h.to_string() << " " << h.target.to_string() << "\n";
    }
    std::cout << "linking:";
    for (std::size_t i = 0; i < k.linking_ok().size(); ++i) {
      const auto& l = k.linking_ok()[i];
      std::cout << " k=" << i << ":" << (l ? (*l ? "yes" : "no") : "n/a");
    }
    std::cout << "\n";
    for (const auto& w : k.warnings()) std::cout << "warning: " << w << "\n";
  }
  if (!a.out.empty()) {
    std::ofstream out(a.out);
    if (!out) throw ConfigError("cannot write " + a.out);
    out << k.to_json().dump(2) << "\n";
  }
  emit_json(s, k.to_json());
  return kExitOk;
}

int eta_eval(const Source& s, const Budget& b, const EtaEvalArgs& a) {
  SkeletonPtr skel = load_skeleton(s, b);
  const Element g = parse_element(a.element);
  skel->tower().check_element(g);
  const auto v = skel->eval(g);
  const auto lvl = skel->level_of(g);
  if (text_enabled(s)) {
    std::cout << symbol_text(v) << "\n";
    if (!v) std::cerr << "value not determined at depth " << skel->depth() << "\n";
  }
  json j{{"element", g.to_string()}, {"value", v ? json(*v) : json(nullptr)}, {"level", lvl ? json(*lvl) : json(nullptr)}};
  emit_json(s, j);
  return kExitOk;
}

int eta_window(const Source& s, const Budget& b, const EtaWindowArgs& a) {
  SkeletonPtr skel = load_skeleton(s, b);
  const std::size_t n = a.level.value_or(skel->depth() == 0 ? 0 : skel->depth() - 1);
  const SymbolWindow w = materialize_window(*skel, n, b);
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (a.out != "-") {
    file.open(a.out, std::ios::binary);
    if (!file) throw ConfigError("cannot write " + a.out);
    os = &file;
  }
  if (a.format == "csv") {
    write_window_csv(*os, w, skel->tower());
  } else if (a.format == "bits") {
    write_window_bits(*os, w);
  } else {
    write_window_pgm(*os, w, skel->tower());
  }
  if (a.out != "-" && text_enabled(s)) {
    std::cout << "wrote D_" << n << " (" << w.length() << " cells, " << w.count_ones() << " ones, " << w.undefined_count()
              << " undefined) to " << a.out << "\n";
  }
  emit_json(s, json{{"level", n}, {"length", w.length()}, {"ones", w.count_ones()}, {"undefined", w.undefined_count()},
                    {"format", a.format}, {"out", a.out}});
  return kExitOk;
}

int periods_show(const Source& s, const Budget& b, const PeriodsShowArgs& a) {
  SkeletonPtr skel = load_skeleton(s, b);
  const QuotientTower& t = skel->tower();
  const CosetSet set = per_set(*skel, a.level, a.symbol, b);
  const std::vector<Element> reps = coset_elements(t, set);
  const Rational frac = make_rational(from_uint64(set.size()), t.domain_size(a.level));
  if (text_enabled(s)) {
    std::cout << "Per(eta, Gamma_" << a.level << ", " << a.symbol << "): " << set.size() << " of " << to_string(t.domain_size(a.level))
              << " cosets, fraction " << num(frac) << "\n";
    for (std::size_t i = 0; i < std::min(a.limit, reps.size()); ++i) std::cout << "  " << reps[i].to_string() << "\n";
    if (reps.size() > a.limit) std::cout << "  ... " << reps.size() - a.limit << " more\n";
  }
  json list = json::array();
  for (const auto& r : reps) list.push_back(r.to_string());
  emit_json(s, json{{"level", a.level}, {"symbol", a.symbol}, {"count", set.size()}, {"fraction", rational_json(frac)},
                    {"representatives", list}});
  return kExitOk;
}

int periods_check(const Source& s, const Budget& b, const PeriodsCheckArgs& a) {
  SkeletonPtr skel = load_skeleton(s, b);
  const ToeplitzArray arr(skel);
  const std::size_t top = a.level.value_or(skel->depth());
  std::vector<CheckResult> results;
  for (std::size_t n = 1; n <= top; ++n) {
    CheckResult r = per_eq_check(arr, n, b);
    r.name = "per-eq n=" + std::to_string(n);
    results.push_back(r);
    if (skel->tower().abelian() && skel->tower().enumerable_size(n) <= 4096) {
      CheckResult e = essential_check(arr, n, b);
      e.name = "essential n=" + std::to_string(n);
      results.push_back(e);
    }
    CheckResult p = per1_structure_check(*skel, n, b);
    p.name = "periodo1 s=" + std::to_string(n);
    results.push_back(p);
  }
  bool failed = false;
  json arrj = json::array();
  for (const auto& r : results) {
    if (text_enabled(s)) print_check(std::cout, r);
    failed = failed || r.failed();
    arrj.push_back(to_json(r));
  }
  emit_json(s, json{{"checks", arrj}});
  return failed ? kExitFail : kExitOk;
}

int analyze_density(const Source& s, const Budget&, const DensityArgs& a) {
  TowerPtr t = load_tower(s);
  const DensityReport r = regularity_verdict(*t, a.levels);
  if (text_enabled(s)) {
    for (std::size_t n = 1; n <= r.d_seq.size(); ++n) std::cout << "d_" << n << " = " << num(r.d_seq[n - 1]) << "\n";
    std::cout << "L partial (" << r.L.terms << " terms) = " << num(r.L.partial) << ", tail " << tail_kind_name(r.L.tail);
    if (r.L.tail == TailKind::Bounded) std::cout << " <= " << num(r.L.tail_bound);
    std::cout << "\n";
    std::cout << "d in [" << num(r.d_interval.lo) << ", " << num(r.d_interval.hi) << "]\n";
    if (r.exp_neg_2L) {
      std::cout << "exp(-2L) in [" << num(r.exp_neg_2L->lo) << ", " << num(r.exp_neg_2L->hi) << "]\n";
    }
    std::cout << "1 - exp(-2L) < 1/4: " << (r.quarter_condition ? "certified" : "not certified") << "\n";
    std::cout << "d < 1 - d: " << (r.d_below_half ? "certified" : "not certified") << "\n";
    std::cout << "verdict: " << verdict_name(r.verdict) << " (" << r.explanation << ")\n";
  }
  emit_json(s, to_json(r));
  return kExitOk;
}

int analyze_measures(const Source& s, const Budget& b, const MeasuresArgs& a) {
  SkeletonPtr skel = load_skeleton(s, b);
  const QuotientTower& t = skel->tower();
  const std::size_t n = a.level.value_or(skel->depth() == 0 ? 0 : skel->depth() - 1);
  if (n == 0) throw ConfigError("measures need depth >= 2");
  json j;
  j["level"] = n;
  const ACounts c = a_counts(*skel, n);
  const CheckResult det = an_det_from_counts(n, c);
  j["a0"] = to_string(c.a0);
  j["a1"] = to_string(c.a1);
  j["j_size"] = to_string(c.j_size);
  j["det"] = to_json(det);
  if (text_enabled(s)) {
    std::cout << "|D_n cap Per(eta,Gamma_n,0)| = " << to_string(c.a0) << ", |D_n cap Per(eta,Gamma_n,1)| = " << to_string(c.a1)
              << ", |J(n)| = " << to_string(c.j_size) << "\n";
    for (const auto& w : det.witnesses) std::cout << w << "\n";
  }
  const DensityReport dens = regularity_verdict(t);
  if (dens.verdict != Verdict::Inconclusive) {
    const Limit01 lim = limit_01(*skel, dens);
    j["mu_0"] = interval_json(lim.zero);
    j["mu_1"] = interval_json(lim.one);
    if (text_enabled(s)) {
      std::cout << "mu([0]) in [" << num(lim.zero.lo) << ", " << num(lim.zero.hi) << "]\n";
      std::cout << "mu([1]) in [" << num(lim.one.lo) << ", " << num(lim.one.hi) << "]\n";
    }
  }
  if (auto z = z_measure_lower_bound(t, n)) {
    j["z_lower_bound"] = rational_json(*z);
    if (text_enabled(s)) std::cout << "prod_{l>=1} (1 - |D_{n+l}|/|D_{n+l+1}|) >= " << num(*z) << "\n";
  }
  if (!a.pattern.empty()) {
    std::string text = a.pattern;
    if (text.front() == '@') {
      std::ifstream in(text.substr(1));
      if (!in) throw ConfigError("cannot read " + text.substr(1));
      std::stringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    const Pattern p = parse_pattern(json::parse(text));
    const PeriodicMeasure mu(skel, n, b);
    const Rational m = mu_cylinder(mu, p, b);
    j["mu_n_cylinder"] = rational_json(m);
    if (text_enabled(s)) std::cout << "mu_" << n << "(pattern) = " << num(m) << "\n";
  }
  emit_json(s, j);
  return kExitOk;
}

int factor_pi(const Source& s, const Budget& b, const PiArgs& a) {
  SkeletonPtr skel = load_skeleton(s, b);
  const Element v = parse_element(a.element);
  const OdometerPoint p = pi_of_orbit(*skel, v, a.levels.value_or(skel->depth()));
  json coords = json::array();
  for (const auto& c : p.cosets) coords.push_back(c.to_string());
  if (text_enabled(s)) {
    for (std::size_t n = 1; n <= p.depth; ++n) std::cout << "c_" << n << " = " << p.cosets[n - 1].to_string() << "\n";
  }
  emit_json(s, json{{"element", v.to_string()}, {"cosets", coords}});
  return kExitOk;
}

int factor_fibers(const Source& s, const Budget& b, const FibersArgs& a) {
  SkeletonPtr skel = load_skeleton(s, b);
  const FiberProfile prof = fiber_profile(*skel, a.level, a.window_level, b);
  std::map<std::uint64_t, std::uint64_t> histogram;
  std::uint64_t forced = 0;
  json entries = json::array();
  for (const auto& e : prof.entries) {
    ++histogram[e.windows];
    forced += e.forced ? 1 : 0;
    entries.push_back({{"coset", e.coset.to_string()}, {"lifts", e.lifts}, {"windows", e.windows},
                       {"undefined", e.undefined}, {"forced", e.forced}});
  }
  const Rational forced_frac = make_rational(from_uint64(forced), from_uint64(prof.entries.size()));
  if (text_enabled(s)) {
    std::cout << prof.entries.size() << " cosets at level " << prof.level << ", window D_" << prof.window_level << "\n";
    std::cout << "forced by periodicity: " << forced << ", fraction " << num(forced_frac) << "\n";
    for (const auto& [w, count] : histogram) std::cout << "  " << count << " cosets with " << w << " distinct windows\n";
    for (std::size_t i = 0; i < std::min(a.limit, prof.entries.size()); ++i) {
      const auto& e = prof.entries[i];
      std::cout << "  " << e.coset.to_string() << ": lifts " << e.lifts << ", windows " << e.windows
                << (e.forced ? ", forced" : "") << (e.undefined ? ", " + std::to_string(e.undefined) + " undefined" : "") << "\n";
    }
  }
  emit_json(s, json{{"level", prof.level}, {"window_level", prof.window_level}, {"forced", rational_json(forced_frac)},
                    {"entries", entries}});
  return kExitOk;
}

int verify(const Source& s, const Budget& b, const VerifyArgs& a) {
  VerifyContext ctx{load_skeleton(s, b), b, s.seed, a.samples.value_or(10000), a.max_level};
  if (a.name == "all") {
    const SuiteReport r = run_all(ctx);
    if (text_enabled(s)) {
      for (const auto& c : r.results) print_check(std::cout, c);
      std::cout << r.passed << " passed, " << r.failed << " failed, " << r.inconclusive << " inconclusive, " << r.vacated
                << " vacated\n";
    }
    emit_json(s, to_json(r));
    return r.any_failed() ? kExitFail : kExitOk;
  }
  const CheckResult r = run_check(ctx, a.name);
  if (text_enabled(s)) {
    print_check(std::cout, r);
    for (const auto& w : r.witnesses) std::cout << "    " << w << "\n";
  }
  emit_json(s, to_json(r));
  return r.failed() ? kExitFail : kExitOk;
}

}  // namespace toeplitz::cli
