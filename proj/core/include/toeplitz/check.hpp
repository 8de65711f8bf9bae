#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace toeplitz {

enum class CheckStatus { Pass, Fail, Inconclusive, Vacated };

std::string status_name(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string scope;
  std::vector<std::string> witnesses;
  std::optional<std::string> counterexample;
  std::vector<std::string> notes;
  double millis = 0.0;

  bool passed() const { return status == CheckStatus::Pass; }
  bool failed() const { return status == CheckStatus::Fail; }

  // Records a failure; only the first counterexample is kept.
  void fail(const std::string& counterexample_text);
  void inconclusive(const std::string& why);
  void vacate(const std::string& why);
};

nlohmann::json to_json(const CheckResult& r);

}  // namespace toeplitz
