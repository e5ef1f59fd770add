// Acceptance suite: runs every validation criterion at its pinned tolerance
// and prints one pass/fail line each. Exits nonzero if any criterion fails.

#include <cstdio>
#include <iostream>

#include "ghw/validate.hpp"

int main() {
  const auto rep = ghw::validate_suite(ghw::ValidateLevel::Full, &std::cout);
  int failed = 0;
  for (const auto& r : rep.results)
    if (!r.pass) ++failed;
  if (failed > 0) {
    std::printf("ACCEPTANCE: %d criterion(s) failed\n", failed);
    return 1;
  }
  std::printf("ACCEPTANCE: all %zu criteria passed\n", rep.results.size());
  return 0;
}
