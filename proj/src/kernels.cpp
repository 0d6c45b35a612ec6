#include "otkit/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace otkit::kern {

namespace detail {

double dot_scalar(const double* a, const double* b, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void exp_scale_scalar(double* x, const double* s, double beta, size_t n) {
  for (size_t i = 0; i < n; ++i) x[i] *= std::exp(beta * s[i]);
}

void scale_scalar(double* x, double c, size_t n) {
  for (size_t i = 0; i < n; ++i) x[i] *= c;
}

void l2_dist_batch_scalar(const double* const* coords, int dim, const double* q, double* out,
                          size_t n) {
  for (size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double d = coords[k][i] - q[k];
      acc += d * d;
    }
    out[i] = std::sqrt(acc);
  }
}

}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("OTKIT_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Isa::avx2;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

Isa g_isa = initial_isa();

}  // namespace

Isa best_isa() { return cpu_has_avx2() ? Isa::avx2 : Isa::scalar; }
Isa active_isa() { return g_isa; }

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !cpu_has_avx2()) isa = Isa::scalar;
  g_isa = isa;
}

double dot(const double* a, const double* b, size_t n) {
  return g_isa == Isa::avx2 ? detail::dot_avx2(a, b, n) : detail::dot_scalar(a, b, n);
}

void exp_scale(double* x, const double* s, double beta, size_t n) {
  if (g_isa == Isa::avx2)
    detail::exp_scale_avx2(x, s, beta, n);
  else
    detail::exp_scale_scalar(x, s, beta, n);
}

void scale(double* x, double c, size_t n) {
  if (g_isa == Isa::avx2)
    detail::scale_avx2(x, c, n);
  else
    detail::scale_scalar(x, c, n);
}

void l2_dist_batch(const double* const* coords, int dim, const double* q, double* out, size_t n) {
  if (g_isa == Isa::avx2)
    detail::l2_dist_batch_avx2(coords, dim, q, out, n);
  else
    detail::l2_dist_batch_scalar(coords, dim, q, out, n);
}

}  // namespace otkit::kern
