#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace ocf {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string name;
  std::string claim;
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  void add(std::string check, bool ok, std::string detail = {}) {
    checks.push_back({std::move(check), ok, std::move(detail)});
  }
  bool passed() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
  std::size_t failures() const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.passed; }));
  }
};

}  // namespace ocf
