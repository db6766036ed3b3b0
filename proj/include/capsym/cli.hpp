#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "capsym/pde.hpp"

namespace capsym {

/// Exit statuses of the command-line tool.
enum ExitStatus : int {
  exit_ok = 0,
  exit_failed = 1,  ///< an inequality or consistency check failed beyond its tolerance, or a solver diverged
  exit_input = 2,   ///< bad arguments, unreadable or malformed files
};

/// Problem description file: `key = value` lines, `#` starts a comment.
///
///   region = omega.field        level function of Omega (required)
///   theta = 1.0471975512        contact angle (required)
///   source = -2                 constant source, or
///   source_file = f.field       sampled source
///   flux = gauge | scaled
///   flux_c = 1                  constant c >= 0 for the scaled flux, or
///   flux_c_file = c.field
///   max_iterations, residual_tol, energy_tol   solver options
///   tolerance, levels                          comparison options
///
/// Relative paths are resolved against the directory of the file.
struct ProblemFile {
  MixedBVP problem;
  SolverOptions solver;
  ComparisonOptions compare;
  std::vector<std::filesystem::path> inputs;  // files the problem reads
};

/// Throws ParseError with the line number for unknown keys or bad values and
/// InputError for unreadable files.
ProblemFile load_problem(const std::filesystem::path& path);

/// Runs one command (argv without the program name). Reports go to `out`,
/// diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace capsym
