#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "toeplitz/presets.hpp"

using namespace toeplitz;
using namespace toeplitz::cli;

namespace {

void add_source(CLI::App* app, Source& s) {
  auto* preset = app->add_option("--preset", s.preset, "Built-in tower")
                     ->check(CLI::IsMember(preset_names()));
  auto* config = app->add_option("--config", s.config, "Tower config JSON file")->check(CLI::ExistingFile);
  preset->excludes(config);
  config->excludes(preset);
  app->add_option("--depth", s.depth, "Construction depth");
  app->add_option("--json", s.json, "Write a JSON report to this path ('-' for stdout)");
  app->add_option("--seed", s.seed, "Seed for sampled checks")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toeplitz arrays over residually finite groups: construction, periods, densities, measures and checks"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t enum_budget = 0;
  app.add_option("--enum-budget", enum_budget, "Override the enumeration budget (also TOEPLITZ_ENUM_BUDGET)");

  Source src;
  std::function<int(const Budget&)> run;

  auto* tower = app.add_subcommand("tower", "Quotient tower tools");
  tower->require_subcommand(1);
  TowerValidateArgs tv;
  auto* tvc = tower->add_subcommand("validate", "Check nestedness, transversality and tiling of the tower");
  add_source(tvc, src);
  tvc->add_option("--levels", tv.levels, "Highest level to check (default: tower depth)");
  tvc->callback([&] { run = [&](const Budget& b) { return tower_validate(src, b, tv); }; });

  auto* eta = app.add_subcommand("eta", "The constructed array");
  eta->require_subcommand(1);
  EtaBuildArgs eb;
  auto* ebc = eta->add_subcommand("build", "Run the construction and print its records");
  add_source(ebc, src);
  ebc->add_option("--out", eb.out, "Write the skeleton as JSON");
  ebc->callback([&] { run = [&](const Budget& b) { return eta_build(src, b, eb); }; });

  EtaEvalArgs ee;
  auto* eec = eta->add_subcommand("eval", "Value of eta at one group element");
  add_source(eec, src);
  eec->add_option("-g,--element", ee.element, "Element, e.g. 14 or (3,-4)")->required();
  eec->callback([&] { run = [&](const Budget& b) { return eta_eval(src, b, ee); }; });

  EtaWindowArgs ew;
  auto* ewc = eta->add_subcommand("window", "Materialize eta on D_n");
  add_source(ewc, src);
  ewc->add_option("--level", ew.level, "Level n (default: depth - 1)");
  ewc->add_option("--format", ew.format, "csv, bits or pgm")->check(CLI::IsMember({"csv", "bits", "pgm"}))->capture_default_str();
  ewc->add_option("--out", ew.out, "Output path ('-' for stdout)")->capture_default_str();
  ewc->callback([&] { run = [&](const Budget& b) { return eta_window(src, b, ew); }; });

  auto* periods = app.add_subcommand("periods", "Period sets");
  periods->require_subcommand(1);
  PeriodsShowArgs ps;
  auto* psc = periods->add_subcommand("show", "List Per(eta, Gamma_n, symbol) as coset representatives");
  add_source(psc, src);
  psc->add_option("--level", ps.level, "Level n")->capture_default_str();
  psc->add_option("--symbol", ps.symbol, "0 or 1")->check(CLI::Range(0, 1))->capture_default_str();
  psc->add_option("--limit", ps.limit, "Representatives to print")->capture_default_str();
  psc->callback([&] { run = [&](const Budget& b) { return periods_show(src, b, ps); }; });

  PeriodsCheckArgs pc;
  auto* pcc = periods->add_subcommand("check", "Period-set identities and essential groups up to a level");
  add_source(pcc, src);
  pcc->add_option("--level", pc.level, "Highest level (default: depth)");
  pcc->callback([&] { run = [&](const Budget& b) { return periods_check(src, b, pc); }; });

  auto* analyze = app.add_subcommand("analyze", "Densities and measures");
  analyze->require_subcommand(1);
  DensityArgs da;
  auto* dac = analyze->add_subcommand("density", "Density sequence and regularity verdict");
  add_source(dac, src);
  dac->add_option("--levels", da.levels, "Levels used (default: tower depth)");
  dac->callback([&] { run = [&](const Budget& b) { return analyze_density(src, b, da); }; });

  MeasuresArgs ma;
  auto* mac = analyze->add_subcommand("measures", "Period counts, A_n, cylinder masses and limit enclosures");
  add_source(mac, src);
  mac->add_option("--level", ma.level, "Level n of mu_n (default: depth - 1)");
  mac->add_option("--pattern", ma.pattern, "Cylinder pattern as JSON or @file");
  mac->callback([&] { run = [&](const Budget& b) { return analyze_measures(src, b, ma); }; });

  auto* factor = app.add_subcommand("factor", "The odometer factor map");
  factor->require_subcommand(1);
  PiArgs pa;
  auto* pac = factor->add_subcommand("pi", "Odometer coordinates of an orbit point");
  add_source(pac, src);
  pac->add_option("-g,--element", pa.element, "v for the orbit point sigma^{v^-1} eta")->required();
  pac->add_option("--levels", pa.levels, "Number of coordinates (default: depth)");
  pac->callback([&] { run = [&](const Budget& b) { return factor_pi(src, b, pa); }; });

  FibersArgs fa;
  auto* fac = factor->add_subcommand("fibers", "Lift statistics over the level-n cosets");
  add_source(fac, src);
  fac->add_option("--level", fa.level, "Level n")->capture_default_str();
  fac->add_option("--window-level", fa.window_level, "Window D_w compared across lifts (default: n)");
  fac->add_option("--limit", fa.limit, "Cosets to print")->capture_default_str();
  fac->callback([&] { run = [&](const Budget& b) { return factor_fibers(src, b, fa); }; });

  VerifyArgs va;
  auto* vac = app.add_subcommand("verify", "Run one registered check or all of them");
  add_source(vac, src);
  vac->add_option("name", va.name, "Check name or 'all'")->required();
  vac->add_option("--max-level", va.max_level, "Upper bound on levels examined");
  vac->add_option("--samples", va.samples, "Seeded samples for sampled checks");
  vac->callback([&] { run = [&](const Budget& b) { return verify(src, b, va); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  if (src.preset.empty() && src.config.empty()) src.preset = "threeadic";

  try {
    Budget budget = Budget::from_env();
    if (enum_budget > 0) budget.enumeration = enum_budget;
    return run(budget);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
