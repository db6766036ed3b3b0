#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace capsym {

/// 12 significant digits, the precision of every report and table.
inline std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Shortest representation that parses back to the same double.
inline std::string fmt_exact(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace capsym
