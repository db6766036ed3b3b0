#include "simplex.hpp"

namespace capsym::detail {

namespace {

using Vec3 = std::array<double, 3>;

// Parameter of the zero crossing on the edge from a negative value a to a
// non-negative value b.
inline double crossing(double a, double b) { return a / (a - b); }

inline Vec3 lerp(const Vec3& p, const Vec3& q, double t) {
  return {p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]), p[2] + t * (q[2] - p[2])};
}

inline Vec3 sub(const Vec3& p, const Vec3& q) { return {p[0] - q[0], p[1] - q[1], p[2] - q[2]}; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return std::abs(dot(sub(b, a), cross(sub(c, a), sub(d, a)))) / 6.0;
}

inline double tri_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 x = cross(sub(b, a), sub(c, a));
  return 0.5 * std::sqrt(dot(x, x));
}

// Gradient of the linear interpolant on a simplex.
bool simplex_gradient(int n, const double* v, const Vec3* pos, Vec3& g) {
  g = {0, 0, 0};
  if (n == 2) {
    const Vec3 e1 = sub(pos[1], pos[0]);
    const Vec3 e2 = sub(pos[2], pos[0]);
    const double det = e1[0] * e2[1] - e1[1] * e2[0];
    if (det == 0.0) return false;
    const double d1 = v[1] - v[0];
    const double d2 = v[2] - v[0];
    g[0] = (d1 * e2[1] - d2 * e1[1]) / det;
    g[1] = (e1[0] * d2 - e2[0] * d1) / det;
    return true;
  }
  const Vec3 e1 = sub(pos[1], pos[0]);
  const Vec3 e2 = sub(pos[2], pos[0]);
  const Vec3 e3 = sub(pos[3], pos[0]);
  const double det = dot(e1, cross(e2, e3));
  if (det == 0.0) return false;
  const Vec3 d{v[1] - v[0], v[2] - v[0], v[3] - v[0]};
  // Rows e_i, solve E g = d with the adjugate.
  const Vec3 c23 = cross(e2, e3);
  const Vec3 c31 = cross(e3, e1);
  const Vec3 c12 = cross(e1, e2);
  for (int k = 0; k < 3; ++k) g[k] = (d[0] * c23[k] + d[1] * c31[k] + d[2] * c12[k]) / det;
  return true;
}

}  // namespace

double negative_fraction_1d(double a, double b) {
  const bool na = a < 0.0;
  const bool nb = b < 0.0;
  if (na && nb) return 1.0;
  if (!na && !nb) return 0.0;
  return na ? crossing(a, b) : crossing(b, a);
}

double negative_fraction_tri(double a, double b, double c) {
  const double v[3] = {a, b, c};
  int neg = 0;
  for (double x : v) neg += x < 0.0;
  if (neg == 0) return 0.0;
  if (neg == 3) return 1.0;
  if (neg == 1) {
    const int i = v[0] < 0.0 ? 0 : (v[1] < 0.0 ? 1 : 2);
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    return crossing(v[i], v[j]) * crossing(v[i], v[k]);
  }
  const int i = v[0] >= 0.0 ? 0 : (v[1] >= 0.0 ? 1 : 2);
  const int j = (i + 1) % 3;
  const int k = (i + 2) % 3;
  // Fraction of the positive corner triangle, measured from the positive side.
  const double sj = v[i] / (v[i] - v[j]);
  const double sk = v[i] / (v[i] - v[k]);
  return 1.0 - sj * sk;
}

double negative_fraction(int n, const double* v, const Vec3* pos) {
  if (n == 2) return negative_fraction_tri(v[0], v[1], v[2]);
  int neg = 0;
  for (int i = 0; i < 4; ++i) neg += v[i] < 0.0;
  if (neg == 0) return 0.0;
  if (neg == 4) return 1.0;
  if (neg == 1 || neg == 3) {
    const bool minority_negative = neg == 1;
    int m = 0;
    for (int i = 0; i < 4; ++i) {
      if ((v[i] < 0.0) == minority_negative) m = i;
    }
    double prod = 1.0;
    for (int i = 0; i < 4; ++i) {
      if (i == m) continue;
      prod *= v[m] / (v[m] - v[i]);
    }
    return minority_negative ? prod : 1.0 - prod;
  }
  int a = -1, b = -1, c = -1, d = -1;
  for (int i = 0; i < 4; ++i) {
    if (v[i] < 0.0) {
      (a < 0 ? a : b) = i;
    } else {
      (c < 0 ? c : d) = i;
    }
  }
  const Vec3 pac = lerp(pos[a], pos[c], crossing(v[a], v[c]));
  const Vec3 pad = lerp(pos[a], pos[d], crossing(v[a], v[d]));
  const Vec3 pbc = lerp(pos[b], pos[c], crossing(v[b], v[c]));
  const Vec3 pbd = lerp(pos[b], pos[d], crossing(v[b], v[d]));
  const double prism = tet_volume(pos[a], pac, pad, pos[b]) + tet_volume(pac, pad, pos[b], pbc) +
                       tet_volume(pad, pos[b], pbc, pbd);
  const double whole = tet_volume(pos[0], pos[1], pos[2], pos[3]);
  return std::min(1.0, prism / whole);
}

bool interface_piece(int n, const double* v, const Vec3* pos, double& area, Vec3& normal) {
  const int nv = n + 1;
  int neg = 0;
  for (int i = 0; i < nv; ++i) neg += v[i] < 0.0;
  if (neg == 0 || neg == nv) return false;
  Vec3 g;
  if (!simplex_gradient(n, v, pos, g)) return false;
  const double gn = std::sqrt(dot(g, g));
  if (gn == 0.0) return false;
  normal = {g[0] / gn, g[1] / gn, g[2] / gn};

  if (n == 2) {
    // One vertex on the minority side; the segment joins its two edges.
    const bool minority_negative = neg == 1;
    int m = 0;
    for (int i = 0; i < 3; ++i) {
      if ((v[i] < 0.0) == minority_negative) m = i;
    }
    Vec3 p[2];
    int k = 0;
    for (int i = 0; i < 3; ++i) {
      if (i == m) continue;
      const int lo = minority_negative ? m : i;  // negative end
      const int hi = minority_negative ? i : m;
      p[k++] = lerp(pos[lo], pos[hi], crossing(v[lo], v[hi]));
    }
    const Vec3 d = sub(p[1], p[0]);
    area = std::sqrt(dot(d, d));
    return true;
  }

  if (neg == 1 || neg == 3) {
    const bool minority_negative = neg == 1;
    int m = 0;
    for (int i = 0; i < 4; ++i) {
      if ((v[i] < 0.0) == minority_negative) m = i;
    }
    Vec3 p[3];
    int k = 0;
    for (int i = 0; i < 4; ++i) {
      if (i == m) continue;
      const int lo = minority_negative ? m : i;
      const int hi = minority_negative ? i : m;
      p[k++] = lerp(pos[lo], pos[hi], crossing(v[lo], v[hi]));
    }
    area = tri_area(p[0], p[1], p[2]);
    return true;
  }
  int a = -1, b = -1, c = -1, d = -1;
  for (int i = 0; i < 4; ++i) {
    if (v[i] < 0.0) {
      (a < 0 ? a : b) = i;
    } else {
      (c < 0 ? c : d) = i;
    }
  }
  const Vec3 pac = lerp(pos[a], pos[c], crossing(v[a], v[c]));
  const Vec3 pad = lerp(pos[a], pos[d], crossing(v[a], v[d]));
  const Vec3 pbd = lerp(pos[b], pos[d], crossing(v[b], v[d]));
  const Vec3 pbc = lerp(pos[b], pos[c], crossing(v[b], v[c]));
  area = tri_area(pac, pad, pbd) + tri_area(pac, pbd, pbc);
  return true;
}

}  // namespace capsym::detail
