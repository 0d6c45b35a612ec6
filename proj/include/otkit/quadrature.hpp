#pragma once

#include <array>

#include "otkit/geometry.hpp"
#include "otkit/measures.hpp"

// Gauss-Legendre order 8 per axis; exact enough for the smooth distance
// integrands here (1e-6 relative target).

namespace otkit {

namespace quad {
inline constexpr std::array<double, 8> kNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
}  // namespace quad

/// Integral of f over a box (tensor-product GL8), f: Pt -> double.
template <typename F>
double integrate_box(const Box& b, int dim, F&& f) {
  double half[kMaxDim], mid[kMaxDim];
  for (int k = 0; k < dim; ++k) {
    half[k] = 0.5 * (b.hi[k] - b.lo[k]);
    mid[k] = 0.5 * (b.hi[k] + b.lo[k]);
    if (half[k] <= 0.0) return 0.0;
  }
  int idx[kMaxDim] = {0, 0, 0, 0};
  double sum = 0.0;
  for (;;) {
    Pt p;
    double w = 1.0;
    for (int k = 0; k < dim; ++k) {
      p[k] = mid[k] + half[k] * quad::kNodes[static_cast<size_t>(idx[k])];
      w *= quad::kWeights[static_cast<size_t>(idx[k])] * half[k];
    }
    sum += w * f(p);
    int k = 0;
    while (k < dim && ++idx[k] == 8) idx[k++] = 0;
    if (k == dim) break;
  }
  return sum;
}

/// Integral of ||a - q|| da over a box.
inline double box_dist_integral(const Box& b, const Pt& q, int dim) {
  return integrate_box(b, dim, [&](const Pt& p) { return dist(p, q, dim); });
}

/// Integral of ||a - q|| dmu(a) over (region intersect support) for a box
/// mixture oracle.
inline double mixture_dist_integral(const DensityOracle& oracle, const Box& region, const Pt& q) {
  const int d = oracle.dim();
  double total = 0.0;
  for (const auto& c : oracle.components()) {
    const Box ov = intersect(c.box, region, d);
    if (empty_box(ov, d)) continue;
    total += c.weight / c.box.volume(d) * box_dist_integral(ov, q, d);
  }
  return total;
}

}  // namespace otkit
