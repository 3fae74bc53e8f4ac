#include <algorithm>
#include <numeric>

#include "bbob_internal.hpp"

namespace psox::bbob {

using detail::idx_frac;
using detail::lambda_entry;
using detail::normal;

namespace {

// fixed stream tags so x_opt, rotations, peaks and samplers never share a
// generator stream
constexpr uint64_t kSuiteStream = 0xb0b5017e0001ull;

constexpr uint64_t kTagXopt = 1;
constexpr uint64_t kTagRot1 = 2;
constexpr uint64_t kTagRot2 = 3;
constexpr uint64_t kTagAux = 4;

// orthonormalize a seeded Gaussian matrix with modified Gram-Schmidt;
// re-draws on (measure-zero) near-degeneracy to stay well conditioned
Matrix random_rotation(uint64_t seed, int dim) {
  Rng rng(seed);
  Matrix q(dim, dim);
  for (;;) {
    for (auto& v : q.a) v = normal(rng);
    bool ok = true;
    for (int i = 0; i < dim && ok; ++i) {
      double* ri = q.row(i);
      for (int k = 0; k < i; ++k) {
        const double* rk = q.row(k);
        double dot = std::inner_product(rk, rk + dim, ri, 0.0);
        for (int j = 0; j < dim; ++j) ri[j] -= dot * rk[j];
      }
      double norm = std::sqrt(std::inner_product(ri, ri + dim, ri, 0.0));
      if (norm < 1e-8) {
        ok = false;
        break;
      }
      for (int j = 0; j < dim; ++j) ri[j] /= norm;
    }
    if (ok) return q;
  }
}

bool needs_rot1(int fid) {
  switch (fid) {
    case 6: case 7: case 9: case 10: case 11: case 12: case 13: case 14:
    case 15: case 16: case 17: case 18: case 19: case 21: case 22: case 23:
    case 24:
      return true;
    default:
      return false;
  }
}

bool needs_rot2(int fid) {
  switch (fid) {
    case 6: case 7: case 13: case 15: case 16: case 17: case 18: case 23:
    case 24:
      return true;
    default:
      return false;
  }
}

void setup_gallagher(ProblemInstance& inst, Rng& rng, int n_peaks, double alpha1) {
  int dim = inst.dim;
  inst.peak_w.resize(n_peaks);
  inst.peak_y = Matrix(n_peaks, dim);
  inst.peak_c = Matrix(n_peaks, dim);

  inst.peak_w[0] = 10.0;
  for (int i = 1; i < n_peaks; ++i)
    inst.peak_w[i] = 1.1 + 8.0 * (i - 1) / (n_peaks - 2);

  // conditioning pool 1000^(2j/(m-2)), dealt without replacement
  std::vector<double> alphas(n_peaks);
  alphas[0] = alpha1;
  std::vector<int> pool(n_peaks - 1);
  std::iota(pool.begin(), pool.end(), 0);
  rng.shuffle(pool);
  for (int i = 1; i < n_peaks; ++i)
    alphas[i] = std::pow(1000.0, 2.0 * pool[i - 1] / (n_peaks - 2));

  // the global peak sits on x_opt; the rest are scattered near-domain-wide
  for (int d = 0; d < dim; ++d) inst.peak_y(0, d) = inst.x_opt[d];
  for (int i = 1; i < n_peaks; ++i)
    for (int d = 0; d < dim; ++d) inst.peak_y(i, d) = rng.uniform(-4.9, 4.9);

  std::vector<int> perm(dim);
  for (int i = 0; i < n_peaks; ++i) {
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    double norm = std::pow(alphas[i], 0.25);
    for (int d = 0; d < dim; ++d)
      inst.peak_c(i, d) = lambda_entry(alphas[i], perm[d], dim) / norm;
  }
}

}  // namespace

FunctionGroup function_group(int fid) {
  require(fid >= 1 && fid <= kNumFunctions, "fid out of range");
  if (fid <= 5) return FunctionGroup::separable;
  if (fid <= 9) return FunctionGroup::low_moderate_conditioning;
  if (fid <= 14) return FunctionGroup::high_conditioning_unimodal;
  if (fid <= 19) return FunctionGroup::multimodal_structured;
  return FunctionGroup::multimodal_weak_structure;
}

const char* group_name(FunctionGroup g) {
  switch (g) {
    case FunctionGroup::separable: return "separable";
    case FunctionGroup::low_moderate_conditioning: return "low_moderate_conditioning";
    case FunctionGroup::high_conditioning_unimodal: return "high_conditioning_unimodal";
    case FunctionGroup::multimodal_structured: return "multimodal_structured";
    case FunctionGroup::multimodal_weak_structure: return "multimodal_weak_structure";
  }
  return "?";
}

const char* function_name(int fid) {
  static const char* names[] = {
      "sphere", "ellipsoid_separable", "rastrigin_separable", "bueche_rastrigin",
      "linear_slope", "attractive_sector", "step_ellipsoid", "rosenbrock",
      "rosenbrock_rotated", "ellipsoid_rotated", "discus", "bent_cigar",
      "sharp_ridge", "different_powers", "rastrigin_rotated", "weierstrass",
      "schaffers_f7", "schaffers_f7_ill", "griewank_rosenbrock", "schwefel",
      "gallagher_101", "gallagher_21", "katsuura", "lunacek_bi_rastrigin"};
  require(fid >= 1 && fid <= kNumFunctions, "fid out of range");
  return names[fid - 1];
}

ProblemInstance make_instance(int fid, int iid, int dim) {
  require(fid >= 1 && fid <= kNumFunctions, "fid must be in 1..24");
  require(iid >= 1, "iid must be >= 1");
  require(dim >= 1 && dim <= 40, "dim must be in 1..40");

  ProblemInstance inst;
  inst.fid = fid;
  inst.iid = iid;
  inst.dim = dim;
  inst.f_opt = 0.0;

  Rng xr(split64(kSuiteStream, fid, iid, dim, kTagXopt));
  inst.x_opt.resize(dim);
  for (auto& v : inst.x_opt) v = xr.uniform(-4.0, 4.0);

  inst.rotation_seeds[0] = split64(kSuiteStream, fid, iid, dim, kTagRot1);
  inst.rotation_seeds[1] = split64(kSuiteStream, fid, iid, dim, kTagRot2);
  if (needs_rot1(fid)) inst.rot1 = random_rotation(inst.rotation_seeds[0], dim);
  if (needs_rot2(fid)) inst.rot2 = random_rotation(inst.rotation_seeds[1], dim);

  Rng aux(split64(kSuiteStream, fid, iid, dim, kTagAux));
  switch (fid) {
    case 5: {
      // axis slopes pointing downhill toward x_opt's side of each axis
      inst.signs.resize(dim);
      for (int i = 0; i < dim; ++i) {
        double sgn = inst.x_opt[i] < 0.0 ? -1.0 : 1.0;
        inst.signs[i] = sgn * std::pow(10.0, idx_frac(i, dim));
      }
      break;
    }
    case 21:
      setup_gallagher(inst, aux, 101, 1000.0);
      break;
    case 22:
      setup_gallagher(inst, aux, 21, 1000.0 * 1000.0);
      break;
    case 24: {
      inst.signs.resize(dim);
      for (int i = 0; i < dim; ++i) inst.signs[i] = aux.u01() < 0.5 ? -1.0 : 1.0;
      break;
    }
    default:
      break;
  }
  return inst;
}

double evaluate(const ProblemInstance& inst, const double* x, size_t len) {
  require(static_cast<int>(len) == inst.dim, "evaluate: dimension mismatch");
  for (size_t i = 0; i < len; ++i)
    require(!std::isnan(x[i]), "evaluate: NaN input coordinate");
  return detail::evaluate_base(inst, x) + inst.f_opt;
}

double evaluate(const ProblemInstance& inst, const std::vector<double>& x) {
  return evaluate(inst, x.data(), x.size());
}

}  // namespace psox::bbob
