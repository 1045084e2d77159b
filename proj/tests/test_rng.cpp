#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

#include "pointproc/rng.hpp"

using namespace pointproc;

TEST_SUITE("rng") {

TEST_CASE("same seed, same sequence") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  Rng c(124);
  bool all_equal = true;
  Rng a2(123);
  for (int i = 0; i < 10; ++i) all_equal = all_equal && (a2.uniform() == c.uniform());
  CHECK_FALSE(all_equal);
}

TEST_CASE("derive_seed separates tags and indices") {
  const std::uint64_t base = 42;
  CHECK(derive_seed(base, 1) != derive_seed(base, 2));
  CHECK(derive_seed(base, 1, 0) != derive_seed(base, 1, 1));
  CHECK(derive_seed(base, 1, 1, 0) != derive_seed(base, 1, 1, 1));
  CHECK(derive_seed(7, 1) != derive_seed(8, 1));
}

TEST_CASE("uniform range and mean") {
  Rng rng(9001);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // 3 sigma with sigma = 1/sqrt(12 n)
  CHECK(std::abs(sum / n - 0.5) < 3.0 / std::sqrt(12.0 * n));
}

TEST_CASE("uniform_pos never returns zero") {
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform_pos();
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
  }
}

TEST_CASE("exponential mean 1/rate") {
  Rng rng(77);
  const int n = 100000;
  const double rate = 2.0;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.exponential(rate);
    REQUIRE(x > 0.0);
    sum += x;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean - 0.5) < 3.0 * 0.5 / std::sqrt(double(n)));
}

TEST_CASE("normal moments") {
  Rng rng(31337);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(double(n)));
  // var estimator sd ~ sqrt(2/n)
  CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / n));
  CHECK(rng.normal(10.0, 0.0) == 10.0);
}

TEST_CASE("uniform_int covers inclusive bounds") {
  Rng rng(4);
  bool saw_lo = false, saw_hi = false;
  for (int i = 0; i < 1000; ++i) {
    const int v = rng.uniform_int(3, 6);
    REQUIRE(v >= 3);
    REQUIRE(v <= 6);
    saw_lo = saw_lo || v == 3;
    saw_hi = saw_hi || v == 6;
  }
  CHECK(saw_lo);
  CHECK(saw_hi);
  CHECK(rng.uniform_int(5, 5) == 5);
}

TEST_CASE("below rejects out-of-range") {
  Rng rng(8);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const std::uint64_t v = rng.below(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  for (int c : counts) CHECK(c > 0);
}

TEST_CASE("shuffle is a permutation") {
  Rng rng(11);
  std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto orig = v;
  rng.shuffle(v);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == orig);
  Rng rng2(11);
  auto w = orig;
  rng2.shuffle(w);
  CHECK(w == v);
}

}  // TEST_SUITE
