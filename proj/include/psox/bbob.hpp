#pragma once
// BBOB-style noiseless suite: 24 base functions with seeded instance
// transforms (uniform interior optimum, f_opt = 0, seeded orthonormal
// rotations), plus the design-space samplers used for landscape analysis.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "psox/common.hpp"

namespace psox::bbob {

inline constexpr int kNumFunctions = 24;
inline constexpr double kBoxLo = -5.0;
inline constexpr double kBoxHi = 5.0;
inline constexpr int kSobolMaxDim = 21;

enum class FunctionGroup {
  separable,                   // f1-f5
  low_moderate_conditioning,   // f6-f9
  high_conditioning_unimodal,  // f10-f14
  multimodal_structured,       // f15-f19
  multimodal_weak_structure,   // f20-f24
};
FunctionGroup function_group(int fid);
const char* group_name(FunctionGroup g);
const char* function_name(int fid);

struct ProblemInstance {
  int fid = 0, iid = 0, dim = 0;
  std::vector<double> x_opt;  // each coordinate in [-4,4]
  double f_opt = 0.0;
  uint64_t rotation_seeds[2] = {0, 0};
  Matrix rot1, rot2;  // orthogonal transforms; empty when the fid needs none

  // per-function extras
  std::vector<double> signs;  // f5 axis slopes / f24 sign pattern
  std::vector<double> peak_w; // gallagher peak heights (f21/f22)
  Matrix peak_y;              // gallagher peak locations, one row per peak
  Matrix peak_c;              // gallagher per-peak diagonal scalings
};

ProblemInstance make_instance(int fid, int iid, int dim);
double evaluate(const ProblemInstance& inst, const double* x, size_t len);
double evaluate(const ProblemInstance& inst, const std::vector<double>& x);

// --- sampling ---------------------------------------------------------------

enum class SampleMethod { uniform, latin_hypercube, sobol };
SampleMethod sample_method_from_string(const std::string& s);
const char* to_string(SampleMethod m);

struct SampleSet {
  int fid = 0, iid = 0, dim = 0;
  uint64_t sample_seed = 0;
  SampleMethod method = SampleMethod::uniform;
  Matrix x;  // n x dim, rows inside the box
  std::vector<double> y;
};

// n points in [lo,hi]^dim. latin_hypercube stratifies every coordinate into n
// equal bins with exactly one point per bin; sobol applies a seeded digital
// shift to a direction-number net (dims <= kSobolMaxDim).
Matrix sample_box(SampleMethod method, size_t n, size_t dim, double lo, double hi,
                  uint64_t seed);
SampleSet sample_instance(const ProblemInstance& inst, size_t n, uint64_t seed,
                          SampleMethod method);

// CSV export: header x1,...,xd,y; 17 significant digits.
void write_sample_csv(const SampleSet& s, std::ostream& out);

}  // namespace psox::bbob
