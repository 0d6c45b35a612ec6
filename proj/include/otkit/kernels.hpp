#pragma once

#include <cstddef>

// Arithmetic inner loops shared by the solvers. Every kernel has a scalar
// reference implementation and an AVX2 variant; the active one is picked at
// runtime from CPU capabilities (override with force_isa or the OTKIT_SIMD
// environment variable, values "scalar"/"avx2").

namespace otkit::kern {

enum class Isa { scalar, avx2 };

Isa best_isa();
Isa active_isa();
void force_isa(Isa isa);

/// Sum of a[i]*b[i].
double dot(const double* a, const double* b, size_t n);

/// x[i] *= exp(beta * s[i]).
void exp_scale(double* x, const double* s, double beta, size_t n);

/// x[i] *= c.
void scale(double* x, double c, size_t n);

/// out[i] = Euclidean distance from q to point i of an SoA coordinate array.
void l2_dist_batch(const double* const* coords, int dim, const double* q, double* out, size_t n);

namespace detail {
double dot_scalar(const double* a, const double* b, size_t n);
double dot_avx2(const double* a, const double* b, size_t n);
void exp_scale_scalar(double* x, const double* s, double beta, size_t n);
void exp_scale_avx2(double* x, const double* s, double beta, size_t n);
void scale_scalar(double* x, double c, size_t n);
void scale_avx2(double* x, double c, size_t n);
void l2_dist_batch_scalar(const double* const* coords, int dim, const double* q, double* out,
                          size_t n);
void l2_dist_batch_avx2(const double* const* coords, int dim, const double* q, double* out,
                        size_t n);
}  // namespace detail

}  // namespace otkit::kern
