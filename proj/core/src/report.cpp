#include "primhom/report.hpp"

#include <algorithm>
#include <cmath>

namespace primhom {

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "unknown";
}

bool Report::pass() const {
  return std::none_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::Fail; });
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json out;
  out["schema"] = 1;
  out["command"] = command;
  out["config"] = config;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["status"] = to_string(c.status);
    j["details"] = c.details;
    j["wall_ms"] = std::round(c.wall_ms * 1000.0) / 1000.0;
    arr.push_back(std::move(j));
  }
  out["checks"] = std::move(arr);
  out["pass"] = pass();
  return out;
}

}  // namespace primhom
