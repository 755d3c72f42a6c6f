#include <cstdlib>
#include <iostream>
#include <string>

#include "ocf/suites.hpp"

// One PASS/FAIL line per acceptance criterion, followed by the failing checks.
int main(int argc, char** argv) {
  ocf::SuiteOptions opts;
  if (const char* j = std::getenv("OCF_JOBS")) opts.jobs = std::max(1, std::atoi(j));
  std::string only = argc > 1 ? argv[1] : "";
  int failed = 0;
  for (const auto& e : ocf::suite_registry()) {
    if (!only.empty() && only != e.name) continue;
    ocf::SuiteReport r = ocf::theorem_suite(e.name, opts);
    std::cout << (r.passed() ? "PASS" : "FAIL") << " criterion " << e.criterion << " [" << r.name
              << "] " << r.claim << " (" << r.seconds << " s)\n";
    for (const auto& c : r.checks) {
      std::cout << "    " << (c.passed ? "ok   " : "FAIL ") << c.name;
      if (!c.detail.empty()) std::cout << ": " << c.detail;
      std::cout << "\n";
    }
    std::cout.flush();
    if (!r.passed()) ++failed;
  }
  std::cout << failed << " criteria failed\n";
  return failed == 0 ? 0 : 1;
}
