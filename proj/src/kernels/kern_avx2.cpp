#include "psox/kernels.hpp"

// AVX2 lane. Compiled with -mavx2 on x86_64 (see CMakeLists); selected at
// runtime only when the CPU reports AVX2. Expression shapes mirror
// kern_scalar.cpp exactly: mul/add only (no FMA intrinsics), same association,
// same four-lane reduction schedule, so results are bit-identical.

#if defined(__AVX2__)

#include <immintrin.h>

namespace psox::kern {
namespace {

void pso_update_avx2(double* v, double* x, const double* pb, const double* lb,
                     const double* r1, const double* r2, double w, double c1,
                     double c2, size_t len) {
  const __m256d vw = _mm256_set1_pd(w);
  const __m256d vc1 = _mm256_set1_pd(c1);
  const __m256d vc2 = _mm256_set1_pd(c2);
  size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d vv = _mm256_loadu_pd(v + i);
    __m256d vx = _mm256_loadu_pd(x + i);
    __m256d vpb = _mm256_loadu_pd(pb + i);
    __m256d vlb = _mm256_loadu_pd(lb + i);
    __m256d vr1 = _mm256_loadu_pd(r1 + i);
    __m256d vr2 = _mm256_loadu_pd(r2 + i);
    // ((w*v) + ((c1*r1)*(pb-x))) + ((c2*r2)*(lb-x))
    __m256d cog = _mm256_mul_pd(_mm256_mul_pd(vc1, vr1), _mm256_sub_pd(vpb, vx));
    __m256d soc = _mm256_mul_pd(_mm256_mul_pd(vc2, vr2), _mm256_sub_pd(vlb, vx));
    __m256d nv = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(vw, vv), cog), soc);
    _mm256_storeu_pd(v + i, nv);
    _mm256_storeu_pd(x + i, _mm256_add_pd(vx, nv));
  }
  for (; i < len; ++i) {
    double nv = w * v[i] + c1 * r1[i] * (pb[i] - x[i]) + c2 * r2[i] * (lb[i] - x[i]);
    v[i] = nv;
    x[i] = x[i] + nv;
  }
}

void dist_sq_cols_avx2(const double* xt, size_t n, size_t dim, const double* q,
                       double* out) {
  for (size_t j = 0; j < n; ++j) out[j] = 0.0;
  for (size_t d = 0; d < dim; ++d) {
    const double* col = xt + d * n;
    const __m256d qd = _mm256_set1_pd(q[d]);
    size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(col + j), qd);
      __m256d acc = _mm256_add_pd(_mm256_loadu_pd(out + j), _mm256_mul_pd(diff, diff));
      _mm256_storeu_pd(out + j, acc);
    }
    for (; j < n; ++j) {
      double diff = col[j] - q[d];
      out[j] = out[j] + diff * diff;
    }
  }
}

void dist_l1_cols_avx2(const double* xt, size_t n, size_t dim, const double* q,
                       double* out) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  for (size_t j = 0; j < n; ++j) out[j] = 0.0;
  for (size_t d = 0; d < dim; ++d) {
    const double* col = xt + d * n;
    const __m256d qd = _mm256_set1_pd(q[d]);
    size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(col + j), qd);
      __m256d ad = _mm256_andnot_pd(signmask, diff);
      _mm256_storeu_pd(out + j, _mm256_add_pd(_mm256_loadu_pd(out + j), ad));
    }
    for (; j < n; ++j) {
      double diff = col[j] - q[d];
      out[j] = out[j] + (diff < 0.0 ? -diff : diff);
    }
  }
}

double aocc_sum_avx2(const double* y, size_t len, double lb, double ub) {
  double inv = 1.0 / (ub - lb);
  const __m256d vlb = _mm256_set1_pd(lb);
  const __m256d vub = _mm256_set1_pd(ub);
  const __m256d vinv = _mm256_set1_pd(inv);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d vacc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d c = _mm256_max_pd(_mm256_min_pd(_mm256_loadu_pd(y + i), vub), vlb);
    __m256d term = _mm256_sub_pd(one, _mm256_mul_pd(_mm256_sub_pd(c, vlb), vinv));
    vacc = _mm256_add_pd(vacc, term);
  }
  alignas(32) double acc[4];
  _mm256_store_pd(acc, vacc);
  for (; i < len; ++i) {
    double c = y[i] < lb ? lb : (y[i] > ub ? ub : y[i]);
    acc[i & 3] += 1.0 - (c - lb) * inv;
  }
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

}  // namespace

const Ops* avx2_ops() {
  static const Ops ops = {"avx2", pso_update_avx2, dist_sq_cols_avx2,
                          dist_l1_cols_avx2, aocc_sum_avx2};
  return &ops;
}

}  // namespace psox::kern

#else

namespace psox::kern {
const Ops* avx2_ops() { return nullptr; }
}  // namespace psox::kern

#endif
