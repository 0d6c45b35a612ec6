#include "otkit/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#define OTKIT_X86 1
#include <immintrin.h>
#else
#define OTKIT_X86 0
#endif

#include <cmath>

namespace otkit::kern::detail {

#if OTKIT_X86

namespace {

// exp via Cody-Waite range reduction and the classic rational approximation
// of e^r on [-ln2/2, ln2/2]; ~1-2 ulp over the finite double range.
constexpr double kLog2E = 1.4426950408889634073599;
constexpr double kC1 = 6.93145751953125e-1;
constexpr double kC2 = 1.42860682030941723212e-6;
constexpr double kP0 = 1.26177193074810590878e-4;
constexpr double kP1 = 3.02994407707441961300e-2;
constexpr double kP2 = 9.99999999999999999910e-1;
constexpr double kQ0 = 3.00198505138664455042e-6;
constexpr double kQ1 = 2.52448340349684104192e-3;
constexpr double kQ2 = 2.27265548208155028766e-1;
constexpr double kQ3 = 2.00000000000000000005e0;
constexpr double kMaxArg = 709.436;
constexpr double kMinArg = -708.396;

__attribute__((target("avx2,fma"))) inline __m256d exp4_pd(__m256d x) {
  x = _mm256_min_pd(x, _mm256_set1_pd(kMaxArg));
  x = _mm256_max_pd(x, _mm256_set1_pd(kMinArg));

  const __m256d n =
      _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kLog2E)),
                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kC1), x);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kC2), r);

  const __m256d rr = _mm256_mul_pd(r, r);
  __m256d p = _mm256_set1_pd(kP0);
  p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(kP1));
  p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(kP2));
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_set1_pd(kQ0);
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(kQ1));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(kQ2));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(kQ3));
  const __m256d e = _mm256_add_pd(
      _mm256_set1_pd(1.0),
      _mm256_div_pd(_mm256_add_pd(p, p), _mm256_sub_pd(q, p)));

  // scale by 2^n through the exponent bits
  const __m128i ni = _mm256_cvtpd_epi32(n);
  const __m256i ni64 = _mm256_cvtepi32_epi64(ni);
  const __m256i bits =
      _mm256_slli_epi64(_mm256_add_epi64(ni64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(e, _mm256_castsi256_pd(bits));
}

}  // namespace

__attribute__((target("avx2,fma"))) double dot_avx2(const double* a, const double* b, size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  const __m256d acc = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

__attribute__((target("avx2,fma"))) void exp_scale_avx2(double* x, const double* s, double beta,
                                                        size_t n) {
  const __m256d vb = _mm256_set1_pd(beta);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d e = exp4_pd(_mm256_mul_pd(vb, _mm256_loadu_pd(s + i)));
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), e));
  }
  for (; i < n; ++i) x[i] *= std::exp(beta * s[i]);
}

__attribute__((target("avx2,fma"))) void scale_avx2(double* x, double c, size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vc));
  for (; i < n; ++i) x[i] *= c;
}

__attribute__((target("avx2,fma"))) void l2_dist_batch_avx2(const double* const* coords, int dim,
                                                            const double* q, double* out,
                                                            size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (int k = 0; k < dim; ++k) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(coords[k] + i), _mm256_set1_pd(q[k]));
      acc = _mm256_fmadd_pd(d, d, acc);
    }
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(acc));
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double d = coords[k][i] - q[k];
      acc += d * d;
    }
    out[i] = std::sqrt(acc);
  }
}

#else  // non-x86 fallback: the avx2 entry points alias the scalar kernels

double dot_avx2(const double* a, const double* b, size_t n) { return dot_scalar(a, b, n); }
void exp_scale_avx2(double* x, const double* s, double beta, size_t n) {
  exp_scale_scalar(x, s, beta, n);
}
void scale_avx2(double* x, double c, size_t n) { scale_scalar(x, c, n); }
void l2_dist_batch_avx2(const double* const* coords, int dim, const double* q, double* out,
                        size_t n) {
  l2_dist_batch_scalar(coords, dim, q, out, n);
}

#endif

}  // namespace otkit::kern::detail
