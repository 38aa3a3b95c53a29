#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "exprbm/rng.hpp"

using exprbm::RngStream;

TEST_CASE("identical seed and stream reproduce the sequence") {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct streams and seeds decorrelate") {
  RngStream a(42, 7), b(42, 8), c(43, 7);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 1000; ++i) {
    std::uint64_t va = a.next_u64();
    same_ab += va == b.next_u64();
    same_ac += va == c.next_u64();
  }
  CHECK(same_ab == 0);
  CHECK(same_ac == 0);
}

TEST_CASE("uniform lies in [0,1) with the right first two moments") {
  RngStream rng(1, 0);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sum_sq += u * u;
  }
  double mean = sum / n;
  double var = sum_sq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("uniform_pos never returns zero") {
  RngStream rng(2, 0);
  for (int i = 0; i < 100000; ++i) CHECK(rng.uniform_pos() > 0.0);
}

TEST_CASE("normal has unit scale and a working spare cache") {
  RngStream rng(3, 0);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  double mean = sum / n;
  double var = sum_sq / n - mean * mean;
  // 4 standard errors: se(mean) = 1/sqrt(n), se(var) ~ sqrt(2/n).
  CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::fabs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));

  RngStream r1(9, 1), r2(9, 1);
  for (int i = 0; i < 101; ++i) CHECK(r1.normal() == r2.normal());
}

TEST_CASE("uniform_below respects the bound and is roughly flat") {
  RngStream rng(4, 0);
  const std::uint64_t k = 7;
  const int n = 140000;
  std::vector<int> counts(k, 0);
  for (int i = 0; i < n; ++i) {
    std::uint64_t v = rng.uniform_below(k);
    REQUIRE(v < k);
    ++counts[v];
  }
  double expect = static_cast<double>(n) / k;
  double sd = std::sqrt(expect * (1.0 - 1.0 / k));
  for (std::uint64_t i = 0; i < k; ++i)
    CHECK(std::fabs(counts[i] - expect) < 5.0 * sd);
  for (int i = 0; i < 100; ++i) CHECK(rng.uniform_below(1) == 0);
}

TEST_CASE("bernoulli hits its endpoints") {
  RngStream rng(5, 0);
  for (int i = 0; i < 1000; ++i) {
    CHECK_FALSE(rng.bernoulli(0.0));
    CHECK(rng.bernoulli(1.0));
  }
  int heads = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) heads += rng.bernoulli(0.25);
  CHECK(std::fabs(heads / static_cast<double>(n) - 0.25) < 0.01);
}
