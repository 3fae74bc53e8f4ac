#pragma once
// Shared plumbing: error taxonomy, deterministic RNG + seed mixing, a row-major
// matrix, shortest-round-trip number formatting, compensated summation.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace psox {

// Argument errors: the caller violated a precondition. Integrity errors: data
// or state broke an internal contract (impossible regret, corrupt checkpoint).
// The CLI maps them to exit codes 1 and 2 respectively.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw ArgumentError(msg);
}
inline void check_integrity(bool ok, const std::string& msg) {
  if (!ok) throw IntegrityError(msg);
}

// ---------------------------------------------------------------------------
// Seed mixing. split64 folds any number of 64-bit parts into a master seed,
// one avalanche round per part:
//   h0 = finalize(master + GOLDEN)
//   h  = finalize(h ^ (part + GOLDEN + (h << 6) + (h >> 2)))   per part, left to right
// where finalize is the splitmix64 finalizer. Run seeds are derived as
// split64(master_seed, topology, config_index, fid, iid, dim, rep); instance
// internals use fixed stream tags so x_opt, rotations and samplers never share
// a stream.

inline constexpr uint64_t kGolden64 = 0x9e3779b97f4a7c15ull;

constexpr uint64_t mix_finalize(uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

constexpr uint64_t mix64(uint64_t h, uint64_t part) {
  return mix_finalize(h ^ (part + kGolden64 + (h << 6) + (h >> 2)));
}

template <class... Parts>
constexpr uint64_t split64(uint64_t master, Parts... parts) {
  uint64_t h = mix_finalize(master + kGolden64);
  ((h = mix64(h, static_cast<uint64_t>(parts))), ...);
  return h;
}

// ---------------------------------------------------------------------------
// Deterministic stream. mt19937_64 is bit-stable across platforms; the [0,1)
// mapping is hand-rolled because std::uniform_real_distribution is
// implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next() { return eng_(); }
  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + u01() * (hi - lo); }
  // Modulo draw: determinism is the contract here, the O(2^-53) bias is not
  // worth a rejection loop.
  uint64_t below(uint64_t n) { return eng_() % n; }

  template <class T>
  void shuffle(std::vector<T>& v) {  // Fisher-Yates, high index down
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 eng_;
};

// ---------------------------------------------------------------------------
struct Matrix {
  size_t rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

  double& operator()(size_t i, size_t j) { return a[i * cols + j]; }
  double operator()(size_t i, size_t j) const { return a[i * cols + j]; }
  double* row(size_t i) { return a.data() + i * cols; }
  const double* row(size_t i) const { return a.data() + i * cols; }
  bool operator==(const Matrix&) const = default;
};

// Neumaier-compensated accumulator; keeps long aggregations at ~1 ulp so
// chunked partial sums reduce to the same totals as a straight pass.
struct NeumaierSum {
  double s = 0.0, c = 0.0;
  void add(double v) {
    double t = s + v;
    if (std::fabs(s) >= std::fabs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

// --- tiny stats helpers used by metrics and ela ----------------------------
double mean_of(const std::vector<double>& v);
double pop_std(const std::vector<double>& v);    // divide by N
double sample_sd(const std::vector<double>& v);  // divide by N-1
double pearson(const std::vector<double>& a, const std::vector<double>& b);

// --- number formatting ------------------------------------------------------
std::string fmt_double(double v);                  // shortest round-trip
std::string fmt_double_sig(double v, int digits);  // fixed significant digits
std::string fmt_int(long long v);
double parse_double(const std::string& s);  // strict: whole string must parse
long long parse_int(const std::string& s);

}  // namespace psox
