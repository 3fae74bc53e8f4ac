#include "psox/kernels.hpp"

// NEON lane for aarch64. Two doubles per vector; same expression shapes and
// accumulation schedule as the scalar lane (lanes 0/1 of the two accumulators
// interleave to the same four-slot schedule only if we keep four scalar slots,
// so the reduction keeps an explicit double[4] just like the other lanes).

#if defined(__aarch64__)

#include <arm_neon.h>

namespace psox::kern {
namespace {

void pso_update_neon(double* v, double* x, const double* pb, const double* lb,
                     const double* r1, const double* r2, double w, double c1,
                     double c2, size_t len) {
  const float64x2_t vw = vdupq_n_f64(w);
  const float64x2_t vc1 = vdupq_n_f64(c1);
  const float64x2_t vc2 = vdupq_n_f64(c2);
  size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    float64x2_t vv = vld1q_f64(v + i);
    float64x2_t vx = vld1q_f64(x + i);
    float64x2_t cog = vmulq_f64(vmulq_f64(vc1, vld1q_f64(r1 + i)),
                                vsubq_f64(vld1q_f64(pb + i), vx));
    float64x2_t soc = vmulq_f64(vmulq_f64(vc2, vld1q_f64(r2 + i)),
                                vsubq_f64(vld1q_f64(lb + i), vx));
    float64x2_t nv = vaddq_f64(vaddq_f64(vmulq_f64(vw, vv), cog), soc);
    vst1q_f64(v + i, nv);
    vst1q_f64(x + i, vaddq_f64(vx, nv));
  }
  for (; i < len; ++i) {
    double nv = w * v[i] + c1 * r1[i] * (pb[i] - x[i]) + c2 * r2[i] * (lb[i] - x[i]);
    v[i] = nv;
    x[i] = x[i] + nv;
  }
}

void dist_sq_cols_neon(const double* xt, size_t n, size_t dim, const double* q,
                       double* out) {
  for (size_t j = 0; j < n; ++j) out[j] = 0.0;
  for (size_t d = 0; d < dim; ++d) {
    const double* col = xt + d * n;
    const float64x2_t qd = vdupq_n_f64(q[d]);
    size_t j = 0;
    for (; j + 2 <= n; j += 2) {
      float64x2_t diff = vsubq_f64(vld1q_f64(col + j), qd);
      vst1q_f64(out + j, vaddq_f64(vld1q_f64(out + j), vmulq_f64(diff, diff)));
    }
    for (; j < n; ++j) {
      double diff = col[j] - q[d];
      out[j] = out[j] + diff * diff;
    }
  }
}

void dist_l1_cols_neon(const double* xt, size_t n, size_t dim, const double* q,
                       double* out) {
  for (size_t j = 0; j < n; ++j) out[j] = 0.0;
  for (size_t d = 0; d < dim; ++d) {
    const double* col = xt + d * n;
    const float64x2_t qd = vdupq_n_f64(q[d]);
    size_t j = 0;
    for (; j + 2 <= n; j += 2) {
      float64x2_t diff = vsubq_f64(vld1q_f64(col + j), qd);
      vst1q_f64(out + j, vaddq_f64(vld1q_f64(out + j), vabsq_f64(diff)));
    }
    for (; j < n; ++j) {
      double diff = col[j] - q[d];
      out[j] = out[j] + (diff < 0.0 ? -diff : diff);
    }
  }
}

double aocc_sum_neon(const double* y, size_t len, double lb, double ub) {
  double inv = 1.0 / (ub - lb);
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const float64x2_t vlb = vdupq_n_f64(lb);
  const float64x2_t vub = vdupq_n_f64(ub);
  const float64x2_t vinv = vdupq_n_f64(inv);
  const float64x2_t one = vdupq_n_f64(1.0);
  float64x2_t a01 = vdupq_n_f64(0.0);  // lanes 0,1 of the schedule
  float64x2_t a23 = vdupq_n_f64(0.0);  // lanes 2,3
  size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    float64x2_t c0 = vmaxq_f64(vminq_f64(vld1q_f64(y + i), vub), vlb);
    float64x2_t c1 = vmaxq_f64(vminq_f64(vld1q_f64(y + i + 2), vub), vlb);
    a01 = vaddq_f64(a01, vsubq_f64(one, vmulq_f64(vsubq_f64(c0, vlb), vinv)));
    a23 = vaddq_f64(a23, vsubq_f64(one, vmulq_f64(vsubq_f64(c1, vlb), vinv)));
  }
  acc[0] = vgetq_lane_f64(a01, 0);
  acc[1] = vgetq_lane_f64(a01, 1);
  acc[2] = vgetq_lane_f64(a23, 0);
  acc[3] = vgetq_lane_f64(a23, 1);
  for (; i < len; ++i) {
    double c = y[i] < lb ? lb : (y[i] > ub ? ub : y[i]);
    acc[i & 3] += 1.0 - (c - lb) * inv;
  }
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

}  // namespace

const Ops* neon_ops() {
  static const Ops ops = {"neon", pso_update_neon, dist_sq_cols_neon,
                          dist_l1_cols_neon, aocc_sum_neon};
  return &ops;
}

}  // namespace psox::kern

#else

namespace psox::kern {
const Ops* neon_ops() { return nullptr; }
}  // namespace psox::kern

#endif
