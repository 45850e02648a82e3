// Acceptance battery: one line per criterion, nonzero exit if any fails.

#include <cstdio>

#include "bolax/acceptance.hpp"

int main() {
  int failures = 0;
  for (int i = 1; i <= bolax::kCriterionCount; ++i) {
    bolax::CriterionResult r;
    try {
      r = bolax::run_criterion(i);
    } catch (const std::exception& e) {
      r.id = "C??";
      r.pass = false;
      r.details = e.what();
    }
    std::printf("[%s] %s %s -- %s\n", r.pass ? "PASS" : "FAIL", r.id.c_str(), r.name.c_str(),
                r.details.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
