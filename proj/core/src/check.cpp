#include "toeplitz/check.hpp"

namespace toeplitz {

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inconclusive: return "inconclusive";
    case CheckStatus::Vacated: return "vacated";
  }
  return "unknown";
}

void CheckResult::fail(const std::string& counterexample_text) {
  if (status != CheckStatus::Fail) {
    status = CheckStatus::Fail;
    counterexample = counterexample_text;
  }
}

void CheckResult::inconclusive(const std::string& why) {
  if (status == CheckStatus::Pass) status = CheckStatus::Inconclusive;
  notes.push_back(why);
}

void CheckResult::vacate(const std::string& why) {
  if (status == CheckStatus::Pass || status == CheckStatus::Inconclusive) status = CheckStatus::Vacated;
  notes.push_back(why);
}

nlohmann::json to_json(const CheckResult& r) {
  nlohmann::json j{{"name", r.name},
                   {"status", status_name(r.status)},
                   {"scope", r.scope},
                   {"witnesses", r.witnesses},
                   {"counterexample", r.counterexample ? nlohmann::json(*r.counterexample) : nlohmann::json(nullptr)},
                   {"millis", r.millis}};
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

}  // namespace toeplitz
