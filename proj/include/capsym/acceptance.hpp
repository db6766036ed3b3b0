#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

// The acceptance battery: twelve property checks over seeded corpora, shared
// by the acceptance test binary and the `suite` command.
namespace capsym::acceptance {

struct Criterion {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // worst observed values against their tolerances
  double seconds = 0.0;
};

struct Options {
  std::uint64_t seed = 20240229;
};

inline constexpr int criterion_count = 12;

std::string criterion_name(int id);

/// Runs one criterion; exceptions from the library are reported as failures.
Criterion run(int id, const Options& opts = {});

/// Runs the given ids (all when empty) in order, calling `done` after each.
std::vector<Criterion> run_all(const Options& opts = {}, const std::vector<int>& ids = {},
                               const std::function<void(const Criterion&)>& done = {});

/// "PASS  3  free-energy identity  <detail>  (1.2 s)"
std::string format_line(const Criterion& c);

}  // namespace capsym::acceptance
