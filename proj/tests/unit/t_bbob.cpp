#include <cmath>
#include <cstring>
#include <set>

#include "doctest.h"
#include "psox/bbob.hpp"

using namespace psox;
using namespace psox::bbob;

namespace {

// independent transcriptions of the coordinate transforms, used only by the
// oracle below so a wiring mistake in the library can't hide itself
double osz_oracle(double v) {
  if (v == 0.0) return 0.0;
  double lx = std::log(std::fabs(v));
  double c1 = v > 0.0 ? 10.0 : 5.5;
  double c2 = v > 0.0 ? 7.9 : 3.1;
  double s = v > 0.0 ? 1.0 : -1.0;
  return s * std::exp(lx + 0.049 * (std::sin(c1 * lx) + std::sin(c2 * lx)));
}

double rastrigin_sep_oracle(const ProblemInstance& inst, const std::vector<double>& x) {
  int d = inst.dim;
  std::vector<double> z(d);
  for (int i = 0; i < d; ++i) {
    double frac = d > 1 ? static_cast<double>(i) / (d - 1) : 0.0;
    double zi = osz_oracle(x[i] - inst.x_opt[i]);
    if (zi > 0.0) zi = std::pow(zi, 1.0 + 0.2 * frac * std::sqrt(zi));
    z[i] = zi * std::pow(10.0, 0.5 * frac);
  }
  double c = 0.0, q = 0.0;
  for (int i = 0; i < d; ++i) {
    c += std::cos(2.0 * M_PI * z[i]);
    q += z[i] * z[i];
  }
  return 10.0 * (d - c) + q;
}

std::vector<double> random_point(Rng& rng, int dim) {
  std::vector<double> x(dim);
  for (auto& v : x) v = rng.uniform(kBoxLo, kBoxHi);
  return x;
}

}  // namespace

TEST_SUITE("bbob") {

TEST_CASE("optimum evaluates to the recorded f_opt for every function") {
  for (int fid = 1; fid <= kNumFunctions; ++fid)
    for (int dim : {2, 5})
      for (int iid : {1, 2, 3}) {
        ProblemInstance inst = make_instance(fid, iid, dim);
        double v = evaluate(inst, inst.x_opt);
        INFO("fid=", fid, " dim=", dim, " iid=", iid);
        CHECK(std::fabs(v - inst.f_opt) <= 1e-9);
      }
}

TEST_CASE("no point in the box beats the optimum") {
  Rng rng(0xbb0bu);
  for (int fid = 1; fid <= kNumFunctions; ++fid)
    for (int dim : {2, 5}) {
      ProblemInstance inst = make_instance(fid, 1, dim);
      size_t probes = dim == 2 ? 10000 : 2000;
      double lowest = 0.0;
      for (size_t p = 0; p < probes; ++p) {
        std::vector<double> x = random_point(rng, dim);
        lowest = std::min(lowest, evaluate(inst, x) - inst.f_opt);
      }
      INFO("fid=", fid, " dim=", dim);
      CHECK(lowest >= -1e-9);
    }
}

TEST_CASE("sphere is an exact shifted sum of squares") {
  ProblemInstance inst = make_instance(1, 1, 4);
  std::vector<double> x = inst.x_opt;
  x[0] += 1.0;
  CHECK(evaluate(inst, x) == 1.0);
  x[2] += 1.0;
  CHECK(evaluate(inst, x) == 2.0);
  x = inst.x_opt;
  x[1] += 0.5;
  CHECK(evaluate(inst, x) == 0.25);
}

TEST_CASE("separable rastrigin matches a direct transcription") {
  Rng rng(77);
  for (int dim : {2, 5, 7}) {
    ProblemInstance inst = make_instance(3, 2, dim);
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<double> x = random_point(rng, dim);
      double got = evaluate(inst, x);
      double want = rastrigin_sep_oracle(inst, x);
      CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("linear slope falls off linearly and flattens past the optimum") {
  ProblemInstance inst = make_instance(5, 1, 3);
  for (int i = 0; i < 3; ++i) {
    double s = inst.signs[i];
    std::vector<double> x = inst.x_opt;
    // one unit downhill-side step along axis i costs exactly |s_i|
    x[i] = inst.x_opt[i] - (s > 0.0 ? 1.0 : -1.0);
    CHECK(evaluate(inst, x) == doctest::Approx(std::fabs(s)).epsilon(1e-12));
    // the far side of the optimum is flat
    x[i] = inst.x_opt[i] + (s > 0.0 ? 1.0 : -1.0);
    CHECK(evaluate(inst, x) == 0.0);
  }
}

TEST_CASE("rotation matrices are orthonormal") {
  for (int fid : {10, 15, 23})
    for (int dim : {2, 5, 8}) {
      ProblemInstance inst = make_instance(fid, 1, dim);
      const Matrix* mats[2] = {&inst.rot1, &inst.rot2};
      for (const Matrix* m : mats) {
        if (m->rows == 0) continue;
        REQUIRE(m->rows == static_cast<size_t>(dim));
        REQUIRE(m->cols == static_cast<size_t>(dim));
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) {
            double dot = 0.0;
            for (int k = 0; k < dim; ++k) dot += (*m)(i, k) * (*m)(j, k);
            CHECK(std::fabs(dot - (i == j ? 1.0 : 0.0)) <= 1e-9);
          }
      }
    }
  // and they are genuine rotations, not the identity
  ProblemInstance inst = make_instance(10, 1, 5);
  double off = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j) off += std::fabs(inst.rot1(i, j));
  CHECK(off > 1e-3);
}

TEST_CASE("instances are reproducible and differ across iids") {
  ProblemInstance a = make_instance(8, 3, 5);
  ProblemInstance b = make_instance(8, 3, 5);
  REQUIRE(a.x_opt.size() == b.x_opt.size());
  CHECK(std::memcmp(a.x_opt.data(), b.x_opt.data(), 5 * sizeof(double)) == 0);
  Rng rng(5);
  std::vector<double> x = random_point(rng, 5);
  CHECK(evaluate(a, x) == evaluate(b, x));

  std::set<double> firsts;
  for (int iid = 1; iid <= 5; ++iid)
    firsts.insert(make_instance(8, iid, 5).x_opt[0]);
  CHECK(firsts.size() == 5);
}

TEST_CASE("optima stay inside the inner box") {
  for (int fid = 1; fid <= kNumFunctions; ++fid)
    for (int dim : {2, 5})
      for (int iid : {1, 2}) {
        ProblemInstance inst = make_instance(fid, iid, dim);
        for (double v : inst.x_opt) {
          CHECK(v >= -4.0);
          CHECK(v <= 4.0);
        }
      }
}

TEST_CASE("function groups split 5/4/5/5/5") {
  CHECK(function_group(1) == FunctionGroup::separable);
  CHECK(function_group(5) == FunctionGroup::separable);
  CHECK(function_group(6) == FunctionGroup::low_moderate_conditioning);
  CHECK(function_group(9) == FunctionGroup::low_moderate_conditioning);
  CHECK(function_group(10) == FunctionGroup::high_conditioning_unimodal);
  CHECK(function_group(14) == FunctionGroup::high_conditioning_unimodal);
  CHECK(function_group(15) == FunctionGroup::multimodal_structured);
  CHECK(function_group(19) == FunctionGroup::multimodal_structured);
  CHECK(function_group(20) == FunctionGroup::multimodal_weak_structure);
  CHECK(function_group(24) == FunctionGroup::multimodal_weak_structure);
  CHECK(std::string(function_name(1)) == "sphere");
  CHECK(std::string(function_name(24)) == "lunacek_bi_rastrigin");
  CHECK(std::string(group_name(FunctionGroup::separable)) == "separable");
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(make_instance(0, 1, 2), ArgumentError);
  CHECK_THROWS_AS(make_instance(25, 1, 2), ArgumentError);
  CHECK_THROWS_AS(make_instance(1, 0, 2), ArgumentError);
  CHECK_THROWS_AS(make_instance(1, 1, 0), ArgumentError);
  CHECK_THROWS_AS(make_instance(1, 1, 41), ArgumentError);
  CHECK_THROWS_AS(function_group(0), ArgumentError);
  CHECK_THROWS_AS(function_name(25), ArgumentError);

  ProblemInstance inst = make_instance(1, 1, 3);
  std::vector<double> short_x = {0.0, 0.0};
  CHECK_THROWS_AS(evaluate(inst, short_x), ArgumentError);
  std::vector<double> bad = {0.0, std::nan(""), 0.0};
  CHECK_THROWS_AS(evaluate(inst, bad), ArgumentError);
}

TEST_CASE("gallagher instances carry their peak tables") {
  ProblemInstance g101 = make_instance(21, 1, 2);
  REQUIRE(g101.peak_w.size() == 101);
  CHECK(g101.peak_w[0] == 10.0);
  REQUIRE(g101.peak_y.rows == 101);
  CHECK(g101.peak_y(0, 0) == g101.x_opt[0]);
  CHECK(g101.peak_y(0, 1) == g101.x_opt[1]);
  for (size_t i = 1; i < g101.peak_w.size(); ++i) {
    CHECK(g101.peak_w[i] >= 1.1);
    CHECK(g101.peak_w[i] <= 9.1 + 1e-12);
  }
  ProblemInstance g21 = make_instance(22, 1, 5);
  CHECK(g21.peak_w.size() == 21);
}

}  // TEST_SUITE
