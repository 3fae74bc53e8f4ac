#include <cstring>
#include <vector>

#include "doctest.h"
#include "psox/common.hpp"
#include "psox/kernels.hpp"

using namespace psox;
using kern::Ops;

namespace {

struct UpdateFixture {
  std::vector<double> v, x, pb, lb, r1, r2;
  double w, c1, c2;
};

UpdateFixture random_fixture(uint64_t seed, size_t len) {
  Rng rng(seed);
  UpdateFixture f;
  auto fill = [&](std::vector<double>& dst) {
    dst.resize(len);
    for (auto& d : dst) d = rng.uniform(-8.0, 8.0);
  };
  fill(f.v);
  fill(f.x);
  fill(f.pb);
  fill(f.lb);
  f.r1.resize(len);
  f.r2.resize(len);
  for (auto& d : f.r1) d = rng.u01();
  for (auto& d : f.r2) d = rng.u01();
  f.w = rng.uniform(0.1, 1.0);
  f.c1 = rng.uniform(0.0, 2.0);
  f.c2 = rng.uniform(0.0, 2.0);
  return f;
}

}  // namespace

TEST_SUITE_BEGIN("kernels");

TEST_CASE("pso_update matches the hand-written recurrence bitwise") {
  for (const Ops* ops : kern::compiled_backends()) {
    CAPTURE(ops->name);
    for (size_t len : {1u, 2u, 3u, 4u, 7u, 64u, 250u}) {
      UpdateFixture f = random_fixture(split64(11, len), len);
      std::vector<double> v = f.v, x = f.x;
      ops->pso_update(v.data(), x.data(), f.pb.data(), f.lb.data(), f.r1.data(),
                      f.r2.data(), f.w, f.c1, f.c2, len);
      for (size_t i = 0; i < len; ++i) {
        double nv = f.w * f.v[i] + f.c1 * f.r1[i] * (f.pb[i] - f.x[i]) +
                    f.c2 * f.r2[i] * (f.lb[i] - f.x[i]);
        CHECK(v[i] == nv);
        CHECK(x[i] == f.x[i] + nv);
      }
    }
  }
}

TEST_CASE("distance kernels match a naive loop bitwise") {
  Rng rng(77);
  for (const Ops* ops : kern::compiled_backends()) {
    CAPTURE(ops->name);
    for (size_t n : {1u, 5u, 8u, 33u}) {
      for (size_t dim : {1u, 2u, 5u, 9u}) {
        std::vector<double> xt(n * dim);
        std::vector<double> q(dim);
        for (auto& d : xt) d = rng.uniform(-5.0, 5.0);
        for (auto& d : q) d = rng.uniform(-5.0, 5.0);
        std::vector<double> out_sq(n), out_l1(n), ref_sq(n, 0.0), ref_l1(n, 0.0);
        for (size_t d = 0; d < dim; ++d)
          for (size_t j = 0; j < n; ++j) {
            double diff = xt[d * n + j] - q[d];
            ref_sq[j] = ref_sq[j] + diff * diff;
            ref_l1[j] = ref_l1[j] + (diff < 0.0 ? -diff : diff);
          }
        ops->dist_sq_cols(xt.data(), n, dim, q.data(), out_sq.data());
        ops->dist_l1_cols(xt.data(), n, dim, q.data(), out_l1.data());
        CHECK(std::memcmp(out_sq.data(), ref_sq.data(), n * sizeof(double)) == 0);
        CHECK(std::memcmp(out_l1.data(), ref_l1.data(), n * sizeof(double)) == 0);
      }
    }
  }
}

TEST_CASE("aocc_sum follows the four-lane schedule on every backend") {
  Rng rng(99);
  for (const Ops* ops : kern::compiled_backends()) {
    CAPTURE(ops->name);
    for (size_t len : {1u, 2u, 3u, 4u, 5u, 17u, 500u}) {
      std::vector<double> y(len);
      for (auto& d : y) d = rng.uniform(-9.0, 9.0);
      double lb = -5.0, ub = 5.0, inv = 1.0 / (ub - lb);
      double acc[4] = {0, 0, 0, 0};
      for (size_t i = 0; i < len; ++i) {
        double c = y[i] < lb ? lb : (y[i] > ub ? ub : y[i]);
        acc[i & 3] += 1.0 - (c - lb) * inv;
      }
      double want = (acc[0] + acc[1]) + (acc[2] + acc[3]);
      CHECK(ops->aocc_sum(y.data(), len, lb, ub) == want);
    }
  }
}

TEST_CASE("all compiled backends agree bitwise with the scalar lane") {
  auto backends = kern::compiled_backends();
  REQUIRE(!backends.empty());
  CHECK(backends.front() == &kern::scalar_ops());
  const Ops& ref = kern::scalar_ops();
  for (const Ops* ops : backends) {
    if (ops == &ref) continue;
    CAPTURE(ops->name);
    UpdateFixture f = random_fixture(4242, 1003);  // deliberately not a multiple of 4
    std::vector<double> v1 = f.v, x1 = f.x, v2 = f.v, x2 = f.x;
    ref.pso_update(v1.data(), x1.data(), f.pb.data(), f.lb.data(), f.r1.data(),
                   f.r2.data(), f.w, f.c1, f.c2, f.v.size());
    ops->pso_update(v2.data(), x2.data(), f.pb.data(), f.lb.data(), f.r1.data(),
                    f.r2.data(), f.w, f.c1, f.c2, f.v.size());
    CHECK(v1 == v2);
    CHECK(x1 == x2);

    CHECK(ref.aocc_sum(f.v.data(), f.v.size(), -5, 5) ==
          ops->aocc_sum(f.v.data(), f.v.size(), -5, 5));
  }
}

TEST_CASE("backend forcing honors availability") {
  kern::force_backend("scalar");
  CHECK(std::string(kern::active_ops().name) == "scalar");
  kern::force_backend("auto");
  if (kern::avx2_supported() && kern::avx2_ops()) {
    CHECK(std::string(kern::active_ops().name) == "avx2");
    kern::force_backend("avx2");
    CHECK(std::string(kern::active_ops().name) == "avx2");
    kern::force_backend("auto");
  }
  CHECK_THROWS_AS(kern::force_backend("sse9"), ArgumentError);
#if !defined(__aarch64__)
  CHECK_THROWS_AS(kern::force_backend("neon"), ArgumentError);
#endif
}

TEST_SUITE_END();
