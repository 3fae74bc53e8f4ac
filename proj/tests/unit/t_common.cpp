#include <cmath>
#include <set>

#include "doctest.h"
#include "psox/common.hpp"

using namespace psox;

TEST_SUITE_BEGIN("common");

TEST_CASE("split64 is deterministic and sensitive to every part") {
  uint64_t a = split64(42u, 1, 2, 3);
  CHECK(a == split64(42u, 1, 2, 3));
  // changing any single part or the master changes the result
  CHECK(a != split64(43u, 1, 2, 3));
  CHECK(a != split64(42u, 0, 2, 3));
  CHECK(a != split64(42u, 1, 3, 3));
  CHECK(a != split64(42u, 1, 2, 4));
  // part order matters
  CHECK(split64(42u, 1, 2) != split64(42u, 2, 1));
  // swapping values across adjacent slots matters (no commutative folding)
  std::set<uint64_t> seen;
  for (int t = 0; t < 3; ++t)
    for (int c = 0; c < 4; ++c)
      for (int r = 0; r < 5; ++r) seen.insert(split64(7u, t, c, 1, 1, 2, r));
  CHECK(seen.size() == 3u * 4u * 5u);
}

TEST_CASE("rng stream basics") {
  Rng r1(123), r2(123);
  for (int i = 0; i < 1000; ++i) {
    double u = r1.u01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == r2.u01());
  }
  Rng r3(124);
  CHECK(Rng(123).u01() != r3.u01());

  std::vector<int> v = {0, 1, 2, 3, 4, 5, 6, 7};
  std::vector<int> w = v;
  Rng s1(9), s2(9);
  s1.shuffle(v);
  s2.shuffle(w);
  CHECK(v == w);
  CHECK(std::set<int>(v.begin(), v.end()).size() == 8);
}

TEST_CASE("shortest round-trip formatting survives a parse") {
  Rng rng(2026);
  for (int i = 0; i < 2000; ++i) {
    double mag = std::ldexp(rng.u01() * 2.0 - 1.0, int(rng.below(600)) - 300);
    double back = parse_double(fmt_double(mag));
    CHECK(back == mag);
  }
  CHECK(fmt_double(0.1) == "0.1");
  CHECK(fmt_double(-0.0) == "-0");
  CHECK(parse_double(fmt_double_sig(3.141592653589793, 17)) == 3.141592653589793);
  CHECK(fmt_int(-42) == "-42");
  CHECK(parse_int("1728") == 1728);
  CHECK_THROWS_AS(parse_int("17x"), ArgumentError);
  CHECK_THROWS_AS(parse_double("1.0.0"), ArgumentError);
  CHECK(std::isnan(parse_double("nan")));
}

TEST_CASE("stats helpers against hand values") {
  std::vector<double> v = {0.2, 0.3};
  CHECK(mean_of(v) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(pop_std(v) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(sample_sd({1.0, 2.0, 3.0}) == doctest::Approx(1.0).epsilon(1e-15));

  std::vector<double> a = {1, 2, 3, 4};
  std::vector<double> b = {2, 4, 6, 8};
  CHECK(pearson(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<double> c = {4, 3, 2, 1};
  CHECK(pearson(a, c) == doctest::Approx(-1.0).epsilon(1e-12));
  std::vector<double> flat = {5, 5, 5, 5};
  CHECK(std::isnan(pearson(a, flat)));
}

TEST_CASE("neumaier summation recovers tiny terms") {
  NeumaierSum s;
  s.add(1e100);
  for (int i = 0; i < 10; ++i) s.add(1.0);
  s.add(-1e100);
  CHECK(s.value() == 10.0);
}

TEST_CASE("matrix layout and error taxonomy") {
  Matrix m(2, 3);
  m(1, 2) = 7.0;
  CHECK(m.a[5] == 7.0);
  CHECK(m.row(1)[2] == 7.0);
  CHECK_THROWS_AS(require(false, "x"), ArgumentError);
  CHECK_THROWS_AS(check_integrity(false, "x"), IntegrityError);
}

TEST_SUITE_END();
