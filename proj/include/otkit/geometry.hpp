#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace otkit {

// Points live in at most kMaxDim dimensions; the instance dimension is
// carried separately so Pt stays a flat POD.
constexpr int kMaxDim = 4;

struct Pt {
  std::array<double, kMaxDim> c{};

  double& operator[](int i) { return c[static_cast<size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<size_t>(i)]; }

  bool operator==(const Pt& o) const { return c == o.c; }
  bool operator<(const Pt& o) const { return c < o.c; }
};

inline double dist2(const Pt& a, const Pt& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double dist(const Pt& a, const Pt& b, int dim) { return std::sqrt(dist2(a, b, dim)); }

// Axis-aligned box, closed on all sides.
struct Box {
  Pt lo, hi;

  bool well_formed(int dim) const {
    for (int i = 0; i < dim; ++i)
      if (lo[i] > hi[i]) return false;
    return true;
  }

  double volume(int dim) const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= std::max(0.0, hi[i] - lo[i]);
    return v;
  }

  bool contains(const Pt& p, int dim) const {
    for (int i = 0; i < dim; ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }

  Pt center(int dim) const {
    Pt p;
    for (int i = 0; i < dim; ++i) p[i] = 0.5 * (lo[i] + hi[i]);
    return p;
  }

  double diameter(int dim) const {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double e = hi[i] - lo[i];
      s += e * e;
    }
    return std::sqrt(s);
  }
};

inline Box intersect(const Box& a, const Box& b, int dim) {
  Box r;
  for (int i = 0; i < dim; ++i) {
    r.lo[i] = std::max(a.lo[i], b.lo[i]);
    r.hi[i] = std::min(a.hi[i], b.hi[i]);
  }
  return r;
}

inline bool empty_box(const Box& b, int dim) {
  for (int i = 0; i < dim; ++i)
    if (b.lo[i] >= b.hi[i]) return true;
  return false;
}

// Distance from a point to the nearest point of a box (0 if inside).
inline double dist_to_box(const Pt& p, const Box& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    double d = 0.0;
    if (p[i] < b.lo[i]) d = b.lo[i] - p[i];
    else if (p[i] > b.hi[i]) d = p[i] - b.hi[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// Distance from a point to the farthest point of a box.
inline double max_dist_to_box(const Pt& p, const Box& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = std::max(std::abs(p[i] - b.lo[i]), std::abs(p[i] - b.hi[i]));
    s += d * d;
  }
  return std::sqrt(s);
}

inline Box bounding_box(const std::vector<Pt>& pts, int dim) {
  Box b;
  for (int i = 0; i < dim; ++i) {
    b.lo[i] = 1e300;
    b.hi[i] = -1e300;
  }
  for (const Pt& p : pts)
    for (int i = 0; i < dim; ++i) {
      b.lo[i] = std::min(b.lo[i], p[i]);
      b.hi[i] = std::max(b.hi[i], p[i]);
    }
  return b;
}

}  // namespace otkit
