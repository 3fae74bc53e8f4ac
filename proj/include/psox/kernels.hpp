#pragma once
// Hot inner loops: scalar reference implementations plus SIMD variants behind
// a runtime-dispatched table. All variants are bit-for-bit equivalent on
// finite inputs: identical per-element operation order, a fixed four-lane
// accumulator schedule for the one true reduction, and the build pins
// -ffp-contract=off so no lane picks up FMA contraction another lacks.

#include <cstddef>
#include <string>
#include <vector>

namespace psox::kern {

struct Ops {
  const char* name;

  // Velocity/position update, flattened over n_particles*dim elements:
  //   v[i] = w*v[i] + c1*r1[i]*(pb[i]-x[i]) + c2*r2[i]*(lb[i]-x[i]);  x[i] += v[i]
  void (*pso_update)(double* v, double* x, const double* pb, const double* lb,
                     const double* r1, const double* r2, double w, double c1,
                     double c2, size_t len);

  // Distances from query q (dim values) to n points stored column-major:
  // xt[d*n + j] = coordinate d of point j. Accumulated in ascending-d order.
  void (*dist_sq_cols)(const double* xt, size_t n, size_t dim, const double* q,
                       double* out);
  void (*dist_l1_cols)(const double* xt, size_t n, size_t dim, const double* q,
                       double* out);

  // sum_i [ 1 - (clamp(y[i],lb,ub)-lb) / (ub-lb) ], four-lane schedule:
  // acc[i&3] += term(i); result = (acc0+acc1)+(acc2+acc3).
  double (*aocc_sum)(const double* y, size_t len, double lb, double ub);
};

const Ops& scalar_ops();
const Ops* avx2_ops();  // null when not compiled in
const Ops* neon_ops();  // null when not compiled in

bool avx2_supported();  // CPU capability at runtime

// Best available backend unless forced. Honors PSOX_KERNEL=scalar|avx2|neon|auto
// on first use; force_backend overrides (test hook; "auto" restores dispatch).
const Ops& active_ops();
void force_backend(const std::string& name);
std::vector<const Ops*> compiled_backends();  // usable on this machine

}  // namespace psox::kern
