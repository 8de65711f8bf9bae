// Acceptance gate: one line per criterion, nonzero exit when any criterion fails.
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "toeplitz/cells.hpp"
#include "toeplitz/density.hpp"
#include "toeplitz/errors.hpp"
#include "toeplitz/measures.hpp"
#include "toeplitz/periods.hpp"
#include "toeplitz/presets.hpp"
#include "toeplitz/skeleton.hpp"
#include "toeplitz/verify.hpp"

using namespace toeplitz;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

SkeletonPtr preset(const std::string& name, std::size_t depth) {
  return build_skeleton(build_tower(preset_config(name)), depth);
}

std::string ints_text(const std::vector<Element>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].to_string();
  return s + "}";
}

std::string q(const Rational& r) { return to_fraction_string(r); }

Outcome construction_fidelity() {
  Outcome o;
  const auto t0 = Clock::now();
  auto s = preset("threeadic", 4);
  const std::vector<std::string> j{"{1,2}", "{4,5,7,8}", "{13,14,16,17,22,23,25,26}"};
  for (std::size_t n = 1; n <= 3; ++n) {
    const std::string got = ints_text(j_set(s->tower(), n).elements);
    o.require(got == j[n - 1], "J(" + std::to_string(n) + ") = " + got);
  }
  std::string rec;
  for (const HRecord& h : s->h_records()) rec += "(" + std::to_string(h.step) + "," + h.h.to_string() + ")";
  o.require(rec == "(3,4)(4,14)", "h-records " + rec);
  const SymbolWindow w = materialize_window(*s, 2);
  std::string bits;
  for (std::uint64_t i = 0; i < w.length(); ++i) bits += std::to_string(w.get(i));
  o.require(bits == "100110100", "window(D_2) = " + bits);
  const double secs = seconds_since(t0);
  o.require(secs < 1.0, "took " + std::to_string(secs) + " s");
  if (o.pass) o.detail = "J(1..3), h-records " + rec + ", window " + bits;
  return o;
}

Outcome j_recursion() {
  Outcome o;
  const auto t0 = Clock::now();
  std::size_t compared = 0;
  const auto compare = [&](const std::string& name, std::size_t top) {
    auto t = build_tower(preset_config(name));
    for (std::size_t n = 1; n <= top; ++n) {
      const JSet a = j_set(*t, n), b = j_set_recursive(*t, n);
      o.require(a.elements == b.elements, name + " J(" + std::to_string(n) + ") differs");
      compared += a.elements.size();
    }
  };
  compare("threeadic", 6);
  compare("irregular-demo", 2);
  const double secs = seconds_since(t0);
  o.require(secs < 5.0, "took " + std::to_string(secs) + " s");
  if (o.pass) o.detail = std::to_string(compared) + " elements, threeadic n<=6, irregular-demo n<=2";
  return o;
}

Outcome per_eq() {
  Outcome o;
  auto s = preset("threeadic", 5);
  const ToeplitzArray eta(s);
  for (std::size_t n = 1; n <= 5; ++n) {
    const CheckResult r = per_eq_check(eta, n);
    o.require(r.passed(), "n=" + std::to_string(n) + ": " + r.counterexample.value_or(status_name(r.status)));
  }
  if (o.pass) o.detail = "threeadic n<=5 with J-sub";
  return o;
}

Outcome density_triple() {
  Outcome o;
  const auto run = [&](const std::string& name, std::size_t depth, std::size_t top) {
    auto s = preset(name, depth);
    for (std::size_t n = 1; n <= top; ++n) {
      const DensityMethods m = d_methods(*s, n);
      o.require(m.enumeration.has_value(), name + " d_" + std::to_string(n) + " not enumerable");
      o.require(m.agree && m.enumeration && *m.enumeration == m.recursion && m.recursion == m.closed_form,
                name + " d_" + std::to_string(n) + " methods disagree");
    }
  };
  run("threeadic", 5, 5);
  run("irregular-demo", 4, 4);
  const Rational one_minus = 1 - d_exact(*preset("threeadic", 3), 2);
  o.require(one_minus == make_rational(4, 9), "1 - d_2 = " + q(one_minus));
  if (o.pass) o.detail = "threeadic n<=5, irregular-demo n<=4, 1-d_2 = 4/9";
  return o;
}

Outcome irregularity() {
  Outcome o;
  const auto t0 = Clock::now();
  const DensityReport r = regularity_verdict(*build_tower(preset_config("irregular-demo")));
  o.require(r.verdict == Verdict::Irregular, "verdict " + verdict_name(r.verdict));
  o.require(r.d_interval.hi < make_rational(1, 4), "d upper " + q(r.d_interval.hi));
  o.require(r.d_interval.hi < 1 - r.d_interval.hi, "d < 1-d not certified");
  o.require(r.exp_neg_2L && r.exp_neg_2L->width() < make_rational(1, 1'000'000), "exp(-2L) enclosure too wide");
  o.require(r.d_interval.width() < make_rational(1, 1'000'000) || r.d_interval.hi < make_rational(1, 4),
            "d enclosure too wide");
  const double secs = seconds_since(t0);
  o.require(secs < 5.0, "took " + std::to_string(secs) + " s");
  if (o.pass) {
    std::ostringstream d;
    d << "d in [" << q(r.d_interval.lo) << ", " << q(r.d_interval.hi) << "], exp(-2L) width "
      << to_decimal_string(r.exp_neg_2L->width());
    o.detail = d.str();
  }
  return o;
}

Outcome determinant() {
  Outcome o;
  for (const std::string name : {"threeadic", "irregular-demo"}) {
    auto s = preset(name, 5);
    for (std::size_t n = 1; n <= 5; ++n) {
      const CheckResult r = an_det_check(*s, n);
      o.require(r.passed(), name + " n=" + std::to_string(n) + ": " + r.counterexample.value_or(""));
    }
  }
  if (o.pass) o.detail = "det A_n = |D_n| for n<=5 on both presets";
  return o;
}

Outcome partitions_c() {
  Outcome o;
  auto s = preset("threeadic", 8);
  for (std::size_t k = 1; k <= 3; ++k) {
    const CheckResult r = partitions_c_check(*s, k, 2, 10'000, 7, 20240601 + k);
    o.require(r.passed(), "k=" + std::to_string(k) + ": " + r.counterexample.value_or(status_name(r.status)));
  }
  if (o.pass) o.detail = "k<=3 exhaustive on D_{k+2} plus 10^4 seeded samples each";
  return o;
}

Outcome good_relation_bound() {
  Outcome o;
  auto s = preset("threeadic", 5);
  const auto M = subsequence_within_tower(*s);
  std::size_t pairs = 0;
  for (std::size_t a : M) {
    for (std::size_t b : M) {
      if (b <= a + 2 || b > s->tower().depth()) continue;
      const GoodRelation g = good_relation(s->tower(), a, b);
      o.require(Rational(static_cast<long>(g.count())) >= g.bound,
                "N_{" + std::to_string(b) + "," + std::to_string(a) + "} = " + std::to_string(g.count()) + " < " + q(g.bound));
      o.require(!g.containment_failure, g.containment_failure.value_or(""));
      ++pairs;
      if (o.pass) o.detail += "N_{" + std::to_string(b) + "," + std::to_string(a) + "} = " + std::to_string(g.count()) +
                              " >= " + q(g.bound) + " ";
    }
  }
  o.require(pairs > 0, "no pair n, m in M with m > n+2 within the tower");
  return o;
}

Outcome patches_and_orbits() {
  Outcome o;
  auto s = preset("threeadic", 5);
  std::uint64_t qualifying = 0, in_u = 0, premise = 0, confirmed = 0;
  const auto M = subsequence_within_tower(*s);
  for (std::size_t n : M) {
    for (std::size_t m : M) {
      if (m < n + 2 || m > s->depth()) continue;
      const PatchStats st = good_patches_scan(s, n, m);
      o.require(!st.violation, st.violation.value_or(""));
      o.require(st.patch_failed == 0, "qualifying gamma_0 without the patch property at (n, m) = (" + std::to_string(n) + ", " + std::to_string(m) + ")");
      qualifying += st.qualifying;
      in_u += st.in_u;
    }
    if (n + 1 > s->depth()) continue;
    const ContainmentStats c = u_in_y_scan(s, n);
    o.require(!c.violation, "U in Y: " + c.violation.value_or(""));
    premise += c.premise;
    confirmed += c.conclusion;
  }
  o.require(qualifying == in_u, std::to_string(qualifying - in_u) + " qualifying gamma_0 outside U_{n_k}");
  VerifyContext ctx;
  ctx.skel = s;
  const CheckResult t = run_check(ctx, "t1t2");
  o.require(!t.failed(), "t1t2: " + t.counterexample.value_or(""));
  if (o.pass) {
    o.detail = std::to_string(qualifying) + " qualifying gamma_0 all in U_{n_k}; " + std::to_string(premise) +
               " representatives in U_{n_k}, " + std::to_string(confirmed) + " in Y_{n_k}";
  }
  return o;
}

Outcome cell_identities() {
  Outcome o;
  VerifyContext ctx;
  ctx.skel = preset("threeadic", 5);
  for (const std::string name : {"z-identity", "containings"}) {
    const CheckResult r = run_check(ctx, name);
    o.require(r.passed(), name + ": " + r.counterexample.value_or(status_name(r.status)));
    if (o.pass && !r.witnesses.empty()) o.detail += name + " [" + r.witnesses.front() + "] ";
  }
  return o;
}

Outcome measure_bounds() {
  Outcome o;
  VerifyContext three;
  three.skel = preset("threeadic", 5);
  const CheckResult u = run_check(three, "uns-bound");
  o.require(u.passed(), "uns-bound: " + u.counterexample.value_or(status_name(u.status)));
  VerifyContext irr;
  irr.skel = preset("irregular-demo", 4);
  const CheckResult t = run_check(irr, "measure-1-trend");
  o.require(t.passed(), "measure-1-trend: " + t.counterexample.value_or(status_name(t.status)));
  if (o.pass) o.detail = (u.witnesses.empty() ? "" : u.witnesses.front()) + "; trend over " +
                         std::to_string(t.witnesses.size()) + " levels";
  return o;
}

// Materializes in a child so the peak RSS belongs to that work alone.
Outcome performance() {
  Outcome o;
  auto s = preset("irregular-demo", 5);
  const auto t0 = Clock::now();
  const pid_t pid = fork();
  if (pid == 0) {
    const SymbolWindow w = materialize_window(*s, 4);
    _exit(w.length() == 3'720'465 && w.complete() ? 0 : 3);
  }
  int status = 0;
  rusage usage{};
  wait4(pid, &status, 0, &usage);
  const double window_secs = seconds_since(t0);
  const double peak_mb = static_cast<double>(usage.ru_maxrss) / 1024.0;
  o.require(WIFEXITED(status) && WEXITSTATUS(status) == 0, "window materialization failed");
  o.require(window_secs < 10.0, "window took " + std::to_string(window_secs) + " s");
  o.require(peak_mb < 64.0, "window peak RSS " + std::to_string(peak_mb) + " MB");

  std::mt19937_64 rng(20240601);
  const std::uint64_t size = s->tower().enumerable_size(5);
  std::vector<Element> points;
  points.reserve(100'000);
  for (int i = 0; i < 100'000; ++i) points.push_back(s->tower().element_at(5, rng() % size));
  const auto t1 = Clock::now();
  std::uint64_t defined = 0;
  for (const Element& g : points) defined += s->eval(g).has_value() ? 1 : 0;
  const double eval_secs = seconds_since(t1);
  o.require(eval_secs < 5.0, "lazy evals took " + std::to_string(eval_secs) + " s");
  if (o.pass) {
    std::ostringstream d;
    d.precision(3);
    d << "window " << window_secs << " s, peak " << peak_mb << " MB; 1e5 evals " << eval_secs << " s (" << defined
      << " defined)";
    o.detail = d.str();
  }
  return o;
}

Outcome regular_control() {
  Outcome o;
  const DensityReport r = regularity_verdict(build_skeleton(build_tower(preset_config("threeadic")), 1)->tower());
  o.require(r.verdict == Verdict::Regular, "verdict " + verdict_name(r.verdict));
  o.require(r.d_seq.size() >= 2 && r.d_seq[0] == make_rational(1, 3) && r.d_seq[1] == make_rational(5, 9),
            "d_seq does not start 1/3, 5/9");
  for (std::size_t i = 1; i < r.d_seq.size(); ++i) o.require(r.d_seq[i - 1] < r.d_seq[i], "d_seq not increasing");
  for (const Rational& d : r.d_seq) o.require(d < 1, "d_n reached 1");
  if (o.pass) o.detail = "Regular, " + std::to_string(r.d_seq.size()) + " levels, d_last = " + q(r.d_seq.back());
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"construction-fidelity", construction_fidelity},
      {"j-recursion-equivalence", j_recursion},
      {"per-eq-and-j-sub", per_eq},
      {"density-triple-agreement", density_triple},
      {"irregularity-verdict", irregularity},
      {"determinant-identity", determinant},
      {"partitions-c", partitions_c},
      {"good-relation-count-bound", good_relation_bound},
      {"good-patches-t1t2-u-in-y", patches_and_orbits},
      {"cell-algebra-identities", cell_identities},
      {"uns-bound-and-measure-1-trend", measure_bounds},
      {"performance-envelope", performance},
      {"regular-case-control", regular_control},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double ms = seconds_since(t0) * 1000.0;
    std::printf("%s %2zu %-30s %9.1f ms  %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), ms,
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
