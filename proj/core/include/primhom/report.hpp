#pragma once

#include <chrono>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace primhom {

enum class CheckStatus { Pass, Fail, Skipped };

std::string to_string(CheckStatus s);

/// One named check inside a report.
struct CheckRecord {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  double wall_ms = 0;
};

/// Machine-readable result of a CLI command: {"schema": 1, "command",
/// "config", "checks": [...], "pass"}.  Keys keep insertion order so output
/// is deterministic apart from timings.
struct Report {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<CheckRecord> checks;

  /// True when no check failed.
  bool pass() const;
  nlohmann::ordered_json to_json() const;
};

/// Milliseconds elapsed since construction.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace primhom
