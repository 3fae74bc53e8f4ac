#include <bit>
#include <numeric>
#include <ostream>

#include "psox/bbob.hpp"

namespace psox::bbob {

namespace {

// Direction-number table (degree, polynomial, initial m values) for dimensions
// 2..21; dimension 1 is the van der Corput sequence. 32-bit resolution.
struct SobolRow {
  int s;
  uint32_t a;
  uint32_t m[7];
};

constexpr SobolRow kSobolRows[] = {
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
    {6, 19, {1, 1, 1, 15, 7, 5}},
    {6, 22, {1, 3, 1, 15, 13, 25}},
    {6, 25, {1, 1, 5, 5, 19, 61}},
    {7, 1, {1, 3, 7, 11, 23, 15, 103}},
    {7, 4, {1, 3, 7, 13, 13, 15, 69}},
};

constexpr int kSobolBits = 32;

// per-dimension direction integers v[bit]
void sobol_directions(int d, uint32_t v[kSobolBits]) {
  if (d == 0) {  // van der Corput: all m = 1
    for (int k = 0; k < kSobolBits; ++k) v[k] = 1u << (31 - k);
    return;
  }
  const SobolRow& row = kSobolRows[d - 1];
  int s = row.s;
  for (int k = 0; k < s; ++k) v[k] = row.m[k] << (31 - k);
  for (int k = s; k < kSobolBits; ++k) {
    uint32_t x = v[k - s] ^ (v[k - s] >> s);
    for (int j = 1; j < s; ++j)
      if ((row.a >> (s - 1 - j)) & 1u) x ^= v[k - j];
    v[k] = x;
  }
}

Matrix sample_uniform(size_t n, size_t dim, double lo, double hi, uint64_t seed) {
  Rng rng(seed);
  Matrix x(n, dim);
  for (size_t i = 0; i < n; ++i)
    for (size_t d = 0; d < dim; ++d) x(i, d) = rng.uniform(lo, hi);
  return x;
}

Matrix sample_lhs(size_t n, size_t dim, double lo, double hi, uint64_t seed) {
  Rng rng(seed);
  Matrix x(n, dim);
  std::vector<std::vector<int>> perm(dim, std::vector<int>(n));
  for (size_t d = 0; d < dim; ++d) {
    std::iota(perm[d].begin(), perm[d].end(), 0);
    rng.shuffle(perm[d]);
  }
  double width = (hi - lo) / static_cast<double>(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t d = 0; d < dim; ++d)
      x(i, d) = lo + (perm[d][i] + rng.u01()) * width;
  return x;
}

Matrix sample_sobol(size_t n, size_t dim, double lo, double hi, uint64_t seed) {
  require(dim >= 1 && dim <= static_cast<size_t>(kSobolMaxDim),
          "sobol sampling supports 1.." + fmt_int(kSobolMaxDim) +
              " dimensions (direction-number table size)");
  // seeded digital shift keeps the dyadic stratification while varying the set
  Rng rng(seed);
  std::vector<uint32_t> shift(dim);
  for (auto& s : shift) s = static_cast<uint32_t>(rng.next() >> 32);

  std::vector<uint32_t> v(dim * kSobolBits);
  for (size_t d = 0; d < dim; ++d) sobol_directions(static_cast<int>(d), &v[d * kSobolBits]);

  Matrix x(n, dim);
  std::vector<uint32_t> state(dim, 0);
  double scale = (hi - lo) * 0x1.0p-32;
  for (size_t i = 0; i < n; ++i) {
    if (i > 0) {
      int bit = std::countr_zero(static_cast<uint32_t>(i));
      for (size_t d = 0; d < dim; ++d) state[d] ^= v[d * kSobolBits + bit];
    }
    for (size_t d = 0; d < dim; ++d)
      x(i, d) = lo + static_cast<double>(state[d] ^ shift[d]) * scale;
  }
  return x;
}

}  // namespace

SampleMethod sample_method_from_string(const std::string& s) {
  if (s == "uniform") return SampleMethod::uniform;
  if (s == "latin_hypercube" || s == "lhs") return SampleMethod::latin_hypercube;
  if (s == "sobol") return SampleMethod::sobol;
  throw ArgumentError("unknown sample method '" + s + "' (uniform|latin_hypercube|sobol)");
}

const char* to_string(SampleMethod m) {
  switch (m) {
    case SampleMethod::uniform: return "uniform";
    case SampleMethod::latin_hypercube: return "latin_hypercube";
    case SampleMethod::sobol: return "sobol";
  }
  return "?";
}

Matrix sample_box(SampleMethod method, size_t n, size_t dim, double lo, double hi,
                  uint64_t seed) {
  require(n >= 2, "sample size must be >= 2");
  require(dim >= 1, "dim must be >= 1");
  require(lo < hi, "empty sampling box");
  switch (method) {
    case SampleMethod::uniform: return sample_uniform(n, dim, lo, hi, seed);
    case SampleMethod::latin_hypercube: return sample_lhs(n, dim, lo, hi, seed);
    case SampleMethod::sobol: return sample_sobol(n, dim, lo, hi, seed);
  }
  throw ArgumentError("bad sample method");
}

SampleSet sample_instance(const ProblemInstance& inst, size_t n, uint64_t seed,
                          SampleMethod method) {
  SampleSet s;
  s.fid = inst.fid;
  s.iid = inst.iid;
  s.dim = inst.dim;
  s.sample_seed = seed;
  s.method = method;
  s.x = sample_box(method, n, inst.dim, kBoxLo, kBoxHi, seed);
  s.y.resize(n);
  for (size_t i = 0; i < n; ++i) s.y[i] = evaluate(inst, s.x.row(i), inst.dim);
  return s;
}

void write_sample_csv(const SampleSet& s, std::ostream& out) {
  for (int d = 1; d <= s.dim; ++d) out << 'x' << d << ',';
  out << "y\n";
  for (size_t i = 0; i < s.x.rows; ++i) {
    for (int d = 0; d < s.dim; ++d) out << fmt_double_sig(s.x(i, d), 17) << ',';
    out << fmt_double_sig(s.y[i], 17) << '\n';
  }
}

}  // namespace psox::bbob
