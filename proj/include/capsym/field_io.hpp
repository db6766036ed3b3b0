#pragma once

#include <filesystem>
#include <iosfwd>

#include "capsym/grid.hpp"

namespace capsym {

// Text field files:
//
//   capsym-field v1 dim=<n> L=<L> h=<h> order=rowmajor-xn-slowest [lattice=full]
//   <values of the first x_1 row>
//   ...
//
// Values are whitespace separated with x_1 fastest and x_n slowest, one x_1 row
// per line. Numbers are written in the shortest form that reads back to the
// same double, so write(read(x)) reproduces x exactly. Without the lattice
// token the grid is a half-space lattice.

void write_field(std::ostream& os, const ScalarField& f);

/// Throws ParseError (with the line number) on a bad header, a malformed or
/// non-finite number, or a value count that does not match the header.
ScalarField read_field(std::istream& is);

ScalarField load_field(const std::filesystem::path& path);
void save_field(const std::filesystem::path& path, const ScalarField& f);

/// A region file is a field file holding phi.
RegionSpec load_region(const std::filesystem::path& path);

}  // namespace capsym
