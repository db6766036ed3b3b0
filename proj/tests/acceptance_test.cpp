// Runs the twelve acceptance criteria and prints one PASS/FAIL line each.
// Optional arguments select criterion ids.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "capsym/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  int failed = 0;
  capsym::acceptance::run_all({}, ids, [&](const capsym::acceptance::Criterion& c) {
    std::printf("%s\n", capsym::acceptance::format_line(c).c_str());
    std::fflush(stdout);
    if (!c.passed) ++failed;
  });
  std::printf("%s: %d criteria failed\n", failed == 0 ? "ACCEPTED" : "REJECTED", failed);
  return failed == 0 ? 0 : 1;
}
