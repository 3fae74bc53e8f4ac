#include <cmath>
#include <sstream>

#include "doctest.h"
#include "psox/bbob.hpp"

using namespace psox;
using namespace psox::bbob;

namespace {

// per-dimension occupancy over `bins` equal cells of [lo,hi)
std::vector<int> bin_counts(const Matrix& x, size_t d, int bins, double lo, double hi) {
  std::vector<int> c(bins, 0);
  for (size_t i = 0; i < x.rows; ++i) {
    int b = static_cast<int>((x(i, d) - lo) / (hi - lo) * bins);
    REQUIRE(b >= 0);
    REQUIRE(b < bins);
    ++c[b];
  }
  return c;
}

}  // namespace

TEST_SUITE("sampling") {

TEST_CASE("uniform sampling stays in the box and is seed-stable") {
  Matrix a = sample_box(SampleMethod::uniform, 10000, 3, kBoxLo, kBoxHi, 42);
  Matrix b = sample_box(SampleMethod::uniform, 10000, 3, kBoxLo, kBoxHi, 42);
  CHECK(a == b);
  Matrix c = sample_box(SampleMethod::uniform, 10000, 3, kBoxLo, kBoxHi, 43);
  CHECK_FALSE(a == c);

  for (size_t d = 0; d < 3; ++d) {
    double mean = 0.0;
    for (size_t i = 0; i < a.rows; ++i) {
      CHECK(a(i, d) >= kBoxLo);
      CHECK(a(i, d) < kBoxHi);
      mean += a(i, d);
    }
    mean /= static_cast<double>(a.rows);
    CHECK(std::fabs(mean) < 0.15);
  }
}

TEST_CASE("latin hypercube places exactly one point per stratum") {
  Matrix tiny = sample_box(SampleMethod::latin_hypercube, 4, 1, 0.0, 4.0, 7);
  std::vector<int> seen(4, 0);
  for (size_t i = 0; i < 4; ++i) ++seen[static_cast<int>(std::floor(tiny(i, 0)))];
  for (int s : seen) CHECK(s == 1);

  Matrix x = sample_box(SampleMethod::latin_hypercube, 100, 4, kBoxLo, kBoxHi, 11);
  for (size_t d = 0; d < 4; ++d)
    for (int cnt : bin_counts(x, d, 100, kBoxLo, kBoxHi)) CHECK(cnt == 1);

  Matrix y = sample_box(SampleMethod::latin_hypercube, 100, 4, kBoxLo, kBoxHi, 11);
  CHECK(x == y);
}

TEST_CASE("sobol points are dyadically stratified in every dimension") {
  Matrix x = sample_box(SampleMethod::sobol, 64, kSobolMaxDim, kBoxLo, kBoxHi, 7);
  for (size_t d = 0; d < static_cast<size_t>(kSobolMaxDim); ++d)
    for (int cnt : bin_counts(x, d, 64, kBoxLo, kBoxHi)) CHECK(cnt == 1);

  // the first two dimensions jointly fill an 8x8 grid one point per cell
  std::vector<int> grid(64, 0);
  for (size_t i = 0; i < 64; ++i) {
    int a = static_cast<int>((x(i, 0) - kBoxLo) / 10.0 * 8);
    int b = static_cast<int>((x(i, 1) - kBoxLo) / 10.0 * 8);
    ++grid[a * 8 + b];
  }
  for (int cnt : grid) CHECK(cnt == 1);

  Matrix y = sample_box(SampleMethod::sobol, 64, kSobolMaxDim, kBoxLo, kBoxHi, 8);
  CHECK_FALSE(x == y);  // digital shift moves the set ...
  for (size_t d = 0; d < static_cast<size_t>(kSobolMaxDim); ++d)
    for (int cnt : bin_counts(y, d, 64, kBoxLo, kBoxHi)) CHECK(cnt == 1);  // ... balance stays
}

TEST_CASE("sampler argument validation") {
  CHECK_THROWS_AS(sample_box(SampleMethod::uniform, 1, 2, kBoxLo, kBoxHi, 1), ArgumentError);
  CHECK_THROWS_AS(sample_box(SampleMethod::uniform, 10, 0, kBoxLo, kBoxHi, 1), ArgumentError);
  CHECK_THROWS_AS(sample_box(SampleMethod::uniform, 10, 2, 5.0, 5.0, 1), ArgumentError);
  CHECK_THROWS_AS(sample_box(SampleMethod::sobol, 10, kSobolMaxDim + 1, kBoxLo, kBoxHi, 1),
                  ArgumentError);

  CHECK(sample_method_from_string("uniform") == SampleMethod::uniform);
  CHECK(sample_method_from_string("lhs") == SampleMethod::latin_hypercube);
  CHECK(sample_method_from_string("latin_hypercube") == SampleMethod::latin_hypercube);
  CHECK(sample_method_from_string("sobol") == SampleMethod::sobol);
  CHECK_THROWS_AS(sample_method_from_string("halton"), ArgumentError);
  CHECK(std::string(to_string(SampleMethod::sobol)) == "sobol");
}

TEST_CASE("instance sampling evaluates each row") {
  ProblemInstance inst = make_instance(1, 1, 2);
  SampleSet s = sample_instance(inst, 50, 99, SampleMethod::latin_hypercube);
  CHECK(s.fid == 1);
  CHECK(s.iid == 1);
  CHECK(s.dim == 2);
  CHECK(s.sample_seed == 99);
  CHECK(s.method == SampleMethod::latin_hypercube);
  REQUIRE(s.x.rows == 50);
  REQUIRE(s.y.size() == 50);
  for (size_t i = 0; i < 50; ++i) CHECK(s.y[i] == evaluate(inst, s.x.row(i), 2));
}

TEST_CASE("sample csv round-trips at full precision") {
  ProblemInstance inst = make_instance(2, 1, 2);
  SampleSet s = sample_instance(inst, 3, 5, SampleMethod::uniform);
  std::ostringstream out;
  write_sample_csv(s, out);

  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "x1,x2,y");
  for (size_t i = 0; i < 3; ++i) {
    REQUIRE(std::getline(in, line));
    size_t c1 = line.find(',');
    size_t c2 = line.find(',', c1 + 1);
    REQUIRE(c1 != std::string::npos);
    REQUIRE(c2 != std::string::npos);
    CHECK(parse_double(line.substr(0, c1)) == s.x(i, 0));
    CHECK(parse_double(line.substr(c1 + 1, c2 - c1 - 1)) == s.x(i, 1));
    CHECK(parse_double(line.substr(c2 + 1)) == s.y[i]);
  }
  CHECK_FALSE(std::getline(in, line));
}

}  // TEST_SUITE
