#pragma once

#include <string>

namespace capsym {

enum class ConeKind { half_space, full_space };

/// The ambient cone: the upper half-space {x_n > 0} or all of R^n.
struct ConeSpec {
  ConeKind kind = ConeKind::half_space;
  int dim = 2;

  static ConeSpec half_space(int dim) { return {ConeKind::half_space, dim}; }
  static ConeSpec full_space(int dim) { return {ConeKind::full_space, dim}; }

  bool has_wall() const { return kind == ConeKind::half_space; }
};

inline std::string to_string(ConeKind k) { return k == ConeKind::half_space ? "half_space" : "full_space"; }

}  // namespace capsym
