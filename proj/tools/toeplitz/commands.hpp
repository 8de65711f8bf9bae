#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "toeplitz/budget.hpp"
#include "toeplitz/skeleton.hpp"

namespace toeplitz::cli {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Source {
  std::string preset;
  std::string config;
  std::optional<std::size_t> depth;
  std::string json;  // path, "-" for stdout
  std::uint64_t seed = 20240601;
};

TowerPtr load_tower(const Source& s);
// Depth defaults to the preset's default, capped at tower depth - 1.
SkeletonPtr load_skeleton(const Source& s, const Budget& budget);

struct TowerValidateArgs {
  std::optional<std::size_t> levels;
};
struct EtaBuildArgs {
  std::string out;
};
struct EtaEvalArgs {
  std::string element;
};
struct EtaWindowArgs {
  std::optional<std::size_t> level;
  std::string format = "csv";
  std::string out = "-";
};
struct PeriodsShowArgs {
  std::size_t level = 1;
  int symbol = 1;
  std::size_t limit = 32;
};
struct PeriodsCheckArgs {
  std::optional<std::size_t> level;
};
struct DensityArgs {
  std::optional<std::size_t> levels;
};
struct MeasuresArgs {
  std::optional<std::size_t> level;
  std::string pattern;  // JSON text or @file
};
struct PiArgs {
  std::string element;
  std::optional<std::size_t> levels;
};
struct FibersArgs {
  std::size_t level = 1;
  std::optional<std::size_t> window_level;
  std::size_t limit = 32;
};
struct VerifyArgs {
  std::string name;
  std::optional<std::size_t> max_level;
  std::optional<std::uint64_t> samples;
};

int tower_validate(const Source& s, const Budget& b, const TowerValidateArgs& a);
int eta_build(const Source& s, const Budget& b, const EtaBuildArgs& a);
int eta_eval(const Source& s, const Budget& b, const EtaEvalArgs& a);
int eta_window(const Source& s, const Budget& b, const EtaWindowArgs& a);
int periods_show(const Source& s, const Budget& b, const PeriodsShowArgs& a);
int periods_check(const Source& s, const Budget& b, const PeriodsCheckArgs& a);
int analyze_density(const Source& s, const Budget& b, const DensityArgs& a);
int analyze_measures(const Source& s, const Budget& b, const MeasuresArgs& a);
int factor_pi(const Source& s, const Budget& b, const PiArgs& a);
int factor_fibers(const Source& s, const Budget& b, const FibersArgs& a);
int verify(const Source& s, const Budget& b, const VerifyArgs& a);

}  // namespace toeplitz::cli
