#include <cstdio>

#include "formkit/acceptance.hpp"

int main() {
  auto results = formkit::run_acceptance();
  int failures = 0;
  int i = 0;
  for (const auto& r : results) {
    ++i;
    std::printf("[%s] %2d. %s (%ld ms) - %s\n", r.pass ? "PASS" : "FAIL", i,
                r.name.c_str(), r.ms, r.details.c_str());
    if (!r.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", i - failures, results.size());
  return failures == 0 ? 0 : 1;
}
