#include "psox/kernels.hpp"

// Reference lane. The SIMD variants must match these bit-for-bit on finite
// inputs, so keep expression shapes in sync when touching either side.

namespace psox::kern {
namespace {

void pso_update_scalar(double* v, double* x, const double* pb, const double* lb,
                       const double* r1, const double* r2, double w, double c1,
                       double c2, size_t len) {
  for (size_t i = 0; i < len; ++i) {
    double nv = w * v[i] + c1 * r1[i] * (pb[i] - x[i]) + c2 * r2[i] * (lb[i] - x[i]);
    v[i] = nv;
    x[i] = x[i] + nv;
  }
}

void dist_sq_cols_scalar(const double* xt, size_t n, size_t dim, const double* q,
                         double* out) {
  for (size_t j = 0; j < n; ++j) out[j] = 0.0;
  for (size_t d = 0; d < dim; ++d) {
    const double* col = xt + d * n;
    double qd = q[d];
    for (size_t j = 0; j < n; ++j) {
      double diff = col[j] - qd;
      out[j] = out[j] + diff * diff;
    }
  }
}

void dist_l1_cols_scalar(const double* xt, size_t n, size_t dim, const double* q,
                         double* out) {
  for (size_t j = 0; j < n; ++j) out[j] = 0.0;
  for (size_t d = 0; d < dim; ++d) {
    const double* col = xt + d * n;
    double qd = q[d];
    for (size_t j = 0; j < n; ++j) {
      double diff = col[j] - qd;
      out[j] = out[j] + (diff < 0.0 ? -diff : diff);
    }
  }
}

double aocc_sum_scalar(const double* y, size_t len, double lb, double ub) {
  double inv = 1.0 / (ub - lb);
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  for (size_t i = 0; i < len; ++i) {
    double c = y[i] < lb ? lb : (y[i] > ub ? ub : y[i]);
    acc[i & 3] += 1.0 - (c - lb) * inv;
  }
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {"scalar", pso_update_scalar, dist_sq_cols_scalar,
                          dist_l1_cols_scalar, aocc_sum_scalar};
  return ops;
}

}  // namespace psox::kern
