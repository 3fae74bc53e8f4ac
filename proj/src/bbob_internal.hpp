#pragma once
// Internals shared between instance construction and the function evaluators.

#include <cmath>

#include "psox/bbob.hpp"

namespace psox::bbob::detail {

// position of coordinate i in [0,1]; collapses to 0 for dim==1 so the
// conditioning exponents stay defined
inline double idx_frac(int i, int dim) {
  return dim > 1 ? static_cast<double>(i) / (dim - 1) : 0.0;
}

// diagonal of the conditioning matrix: alpha^(idx_frac/2)
inline double lambda_entry(double alpha, int i, int dim) {
  return std::pow(alpha, 0.5 * idx_frac(i, dim));
}

// boundary penalty sum max(0, |x_i|-5)^2
inline double f_pen(const double* x, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    double e = std::fabs(x[i]) - 5.0;
    if (e > 0.0) s += e * e;
  }
  return s;
}

// irregular oscillation transform, elementwise
inline double t_osz(double v) {
  if (v == 0.0) return 0.0;
  double xhat = std::log(std::fabs(v));
  double c1 = v > 0.0 ? 10.0 : 5.5;
  double c2 = v > 0.0 ? 7.9 : 3.1;
  double sgn = v > 0.0 ? 1.0 : -1.0;
  return sgn * std::exp(xhat + 0.049 * (std::sin(c1 * xhat) + std::sin(c2 * xhat)));
}

// asymmetry transform, in place
inline void t_asy(double* z, int dim, double beta) {
  for (int i = 0; i < dim; ++i)
    if (z[i] > 0.0) z[i] = std::pow(z[i], 1.0 + beta * idx_frac(i, dim) * std::sqrt(z[i]));
}

inline void mat_vec(const Matrix& m, const double* in, double* out) {
  for (size_t i = 0; i < m.rows; ++i) {
    double acc = 0.0;
    const double* r = m.row(i);
    for (size_t j = 0; j < m.cols; ++j) acc += r[j] * in[j];
    out[i] = acc;
  }
}

// standard normal via Box-Muller on the deterministic stream
inline double normal(Rng& rng) {
  double u1 = 1.0 - rng.u01();  // (0,1]
  double u2 = rng.u01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double evaluate_base(const ProblemInstance& inst, const double* x);

// Schwefel sine optimum: argmax of u*sin(sqrt(u)) near 420.97; the matching
// value constant is computed from it at run time so the optimum lands on 0
// exactly by construction.
inline constexpr double kSchwefelU = 420.9687462275036;

}  // namespace psox::bbob::detail
