#include "capsym/field_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "capsym/error.hpp"
#include "format.hpp"

namespace capsym {

namespace {

constexpr const char* kMagic = "capsym-field";
constexpr const char* kOrder = "rowmajor-xn-slowest";

double parse_number(std::string_view tok, std::size_t line, const char* what) {
  double v = 0.0;
  const char* end = tok.data() + tok.size();
  auto res = std::from_chars(tok.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ParseError(std::string("malformed ") + what + " '" + std::string(tok) + "'", line);
  }
  if (!std::isfinite(v)) throw ParseError(std::string("non-finite ") + what + " '" + std::string(tok) + "'", line);
  return v;
}

GridSpec parse_header(const std::string& text) {
  std::istringstream hs(text);
  std::string magic, version, tok;
  hs >> magic >> version;
  if (magic != kMagic) throw ParseError("not a capsym field file (missing 'capsym-field' header)", 1);
  if (version != "v1") throw ParseError("unsupported field file version '" + version + "'", 1);
  GridSpec g;
  bool has_dim = false, has_L = false, has_h = false, has_order = false;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("header token '" + tok + "' is not key=value", 1);
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "dim") {
      if (val != "2" && val != "3") throw ParseError("header dim must be 2 or 3, got '" + val + "'", 1);
      g.dim = val[0] - '0';
      has_dim = true;
    } else if (key == "L") {
      g.half_extent = parse_number(val, 1, "header L");
      has_L = true;
    } else if (key == "h") {
      g.spacing = parse_number(val, 1, "header h");
      has_h = true;
    } else if (key == "order") {
      if (val != kOrder) throw ParseError("unsupported value order '" + val + "'", 1);
      has_order = true;
    } else if (key == "lattice") {
      if (val == "full") {
        g.lattice = ConeKind::full_space;
      } else if (val == "half") {
        g.lattice = ConeKind::half_space;
      } else {
        throw ParseError("unknown lattice '" + val + "'", 1);
      }
    } else {
      throw ParseError("unknown header key '" + key + "'", 1);
    }
  }
  if (!has_dim || !has_L || !has_h || !has_order) throw ParseError("header needs dim, L, h and order", 1);
  try {
    g.validate();
  } catch (const InputError& e) {
    throw ParseError(e.what(), 1);
  }
  return g;
}

}  // namespace

void write_field(std::ostream& os, const ScalarField& f) {
  f.validate();
  const GridSpec& g = f.grid;
  os << kMagic << " v1 dim=" << g.dim << " L=" << fmt_exact(g.half_extent) << " h=" << fmt_exact(g.spacing)
     << " order=" << kOrder;
  if (g.lattice == ConeKind::full_space) os << " lattice=full";
  os << '\n';
  const auto row = static_cast<std::size_t>(g.node_counts()[0]);
  std::string line;
  for (std::size_t i = 0; i < f.values.size(); i += row) {
    line.clear();
    for (std::size_t k = 0; k < row; ++k) {
      if (k > 0) line += ' ';
      line += fmt_exact(f.values[i + k]);
    }
    line += '\n';
    os << line;
  }
}

ScalarField read_field(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("empty field file", 1);
  ScalarField f;
  f.grid = parse_header(line);
  const std::size_t expected = f.grid.node_count();
  f.values.reserve(expected);
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos >= line.size()) break;
      std::size_t end = pos;
      while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
      if (f.values.size() == expected) {
        throw ParseError("more values than the header allows (expected " + std::to_string(expected) + ")", lineno);
      }
      f.values.push_back(parse_number(std::string_view(line).substr(pos, end - pos), lineno, "value"));
      pos = end;
    }
  }
  if (f.values.size() != expected) {
    throw ParseError("header expects " + std::to_string(expected) + " values for dim=" + std::to_string(f.grid.dim) +
                         ", file has " + std::to_string(f.values.size()),
                     lineno);
  }
  return f;
}

ScalarField load_field(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open field file " + path.string());
  try {
    return read_field(in);
  } catch (const ParseError& e) {
    throw ParseError(e.detail() + " (in " + path.string() + ")", e.line());
  }
}

void save_field(const std::filesystem::path& path, const ScalarField& f) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write field file " + path.string());
  write_field(out, f);
  if (!out) throw InputError("failed writing field file " + path.string());
}

RegionSpec load_region(const std::filesystem::path& path) {
  ScalarField f = load_field(path);
  return {f.grid, std::move(f.values)};
}

}  // namespace capsym
