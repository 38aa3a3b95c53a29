#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "doctest.h"
#include "exprbm/activation.hpp"
#include "exprbm/errors.hpp"
#include "exprbm/rng.hpp"
#include "exprbm/sampling.hpp"
#include "oracles.hpp"

using namespace exprbm;

namespace {

std::vector<double> draw_gaussian_approx(double eta, const ActivationSpec& s,
                                         std::size_t n, std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::vector<double> out(n);
  for (double& v : out) v = sample_gaussian_approx(eta, s, rng);
  return out;
}

std::vector<double> draw_exact(double eta, const ActivationSpec& s,
                               std::size_t n, std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::vector<double> out(n);
  for (double& v : out) v = sample_exact(eta, s, rng);
  return out;
}

}  // namespace

TEST_CASE("gaussian approximation has the right first two moments") {
  const std::size_t n = 40000;
  const ActivationSpec& sp = unit_by_name("softplus");
  double eta = 1.3;
  auto v = draw_gaussian_approx(eta, sp, n, 11);
  double mean = sp.f(eta), var = sp.f_prime(eta);
  CHECK(std::fabs(oracle::mean_of(v) - mean) <
        4.0 * std::sqrt(var / static_cast<double>(n)));
  CHECK(std::fabs(oracle::variance_of(v) - var) <
        4.0 * var * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("degenerate conditionals return the mean without consuming draws") {
  const ActivationSpec& relu = unit_by_name("relu");
  RngStream used(5, 5), fresh(5, 5);
  for (int i = 0; i < 100; ++i)
    CHECK(sample_gaussian_approx(-2.0, relu, used) == 0.0);
  CHECK(used.next_u64() == fresh.next_u64());

  // Same branch for a positive-support unit far into its flat tail.
  const ActivationSpec& sp = unit_by_name("softplus");
  double y = sample_gaussian_approx(-40.0, sp, used);
  CHECK(y == sp.f(-40.0));
}

TEST_CASE("variance clamp caps wide conditionals") {
  const ActivationSpec& e = unit_by_name("exp");
  const std::size_t n = 40000;
  double eta = 14.0;  // f' = e^14 > the 1e6 cap
  auto v = draw_gaussian_approx(eta, e, n, 13);
  double var = oracle::variance_of(v);
  CHECK(std::fabs(var - 1e6) < 4.0 * 1e6 * std::sqrt(2.0 / n));
  CHECK(std::fabs(oracle::mean_of(v) - e.f(eta)) <
        4.0 * std::sqrt(1e6 / static_cast<double>(n)));
}

TEST_CASE("nonnegative supports clamp approximate draws at zero") {
  const ActivationSpec& sp = unit_by_name("softplus");
  auto v = draw_gaussian_approx(-1.5, sp, 20000, 17);
  double smallest = 1.0;
  for (double y : v) {
    CHECK(y >= 0.0);
    smallest = std::min(smallest, y);
  }
  CHECK(smallest == 0.0);  // the clamp actually fires at this eta
}

TEST_CASE("binary exact samplers match their success probabilities") {
  const std::size_t n = 40000;
  {
    auto v = draw_exact(0.8, unit_by_name("sigmoid"), n, 19);
    for (double y : v) CHECK((y == 0.0 || y == 1.0));
    double p = sigmoid(0.8);
    CHECK(std::fabs(oracle::mean_of(v) - p) <
          4.0 * std::sqrt(p * (1.0 - p) / n));
  }
  {
    auto v = draw_exact(1.2, unit_by_name("noisy-tanh"), n, 23);
    for (double y : v) CHECK((y == -0.5 || y == 0.5));
    double m = unit_by_name("noisy-tanh").f(1.2);
    CHECK(std::fabs(oracle::mean_of(v) - m) < 4.0 * 0.5 / std::sqrt(n));
  }
}

TEST_CASE("linear exact sampler is the unit-variance gaussian") {
  const std::size_t n = 40000;
  auto v = draw_exact(-0.3, unit_by_name("linear"), n, 29);
  CHECK(std::fabs(oracle::mean_of(v) + 0.3) < 4.0 / std::sqrt(n));
  CHECK(std::fabs(oracle::variance_of(v) - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("poisson sampler moments across both branches") {
  const ActivationSpec& p = unit_by_name("poisson");
  const std::size_t n = 100000;
  for (double lambda : {0.5, 5.0, 30.0, 100.0}) {
    auto v = draw_exact(std::log(lambda), p, n, 31);
    for (std::size_t i = 0; i < 100; ++i) {
      CHECK(v[i] >= 0.0);
      CHECK(std::floor(v[i]) == v[i]);
    }
    INFO("lambda=" << lambda);
    CHECK(std::fabs(oracle::mean_of(v) - lambda) <
          4.0 * std::sqrt(lambda / n));
    CHECK(std::fabs(oracle::variance_of(v) - lambda) <
          4.0 * std::sqrt((lambda + 2.0 * lambda * lambda) / n));
  }
}

TEST_CASE("units without an exact conditional say so") {
  RngStream rng(1, 1);
  CHECK_THROWS_AS(sample_exact(0.5, unit_by_name("relu"), rng),
                  UnsupportedExactSampler);
  CHECK_THROWS_AS(sample_exact(0.5, unit_by_name("arcsinh"), rng),
                  UnsupportedExactSampler);
}

TEST_CASE("sampling is reproducible per stream") {
  RngStream a(7, 3), b(7, 3);
  const ActivationSpec& sp = unit_by_name("symsqu");
  for (int i = 0; i < 50; ++i)
    CHECK(sample_gaussian_approx(1.1, sp, a) ==
          sample_gaussian_approx(1.1, sp, b));
}

TEST_CASE("linear conditional table is the standard gaussian") {
  const ActivationSpec& lin = unit_by_name("linear");
  auto t = normalized_conditional(1.7, lin);
  CHECK_FALSE(t.discrete);
  CHECK(t.normalizer_log ==
        doctest::Approx(0.5 * std::log(2.0 * M_PI)).epsilon(1e-9));
  for (std::size_t i = 0; i < t.y_grid.size(); i += 97)
    CHECK(t.log_density[i] ==
          doctest::Approx(gaussian_log_pdf(t.y_grid[i], 1.7, 1.0))
              .epsilon(1e-8));
  CHECK(tv_distance_to_gaussian(t, 1.7, 1.0) < 1e-5);
}

TEST_CASE("binary conditional table is the bernoulli mass") {
  auto t = normalized_conditional(0.9, unit_by_name("sigmoid"));
  REQUIRE(t.discrete);
  REQUIRE(t.y_grid.size() == 2);
  CHECK(std::exp(t.log_density[0]) ==
        doctest::Approx(1.0 - sigmoid(0.9)).epsilon(1e-12));
  CHECK(std::exp(t.log_density[1]) ==
        doctest::Approx(sigmoid(0.9)).epsilon(1e-12));
}

TEST_CASE("poisson conditional table sums to one with the right mean") {
  auto t = normalized_conditional(std::log(5.0), unit_by_name("poisson"));
  REQUIRE(t.discrete);
  double total = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < t.y_grid.size(); ++i) {
    double pm = std::exp(t.log_density[i]);
    total += pm;
    mean += pm * t.y_grid[i];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(mean == doctest::Approx(5.0).epsilon(1e-8));
}

TEST_CASE("table normalizer matches an independent integrator") {
  const ActivationSpec& sp = unit_by_name("softplus");
  for (double eta : {-1.0, 0.5, 2.5}) {
    double table = base_measure_integral(eta, sp);
    double reference = oracle::integrate(
        [&](double y) {
          return std::exp(conditional_log_density_unnormalized(eta, y, sp));
        },
        0.0, sp.f(eta) + 12.0);
    INFO("eta=" << eta);
    CHECK(table == doctest::Approx(reference).epsilon(1e-7));
  }
}

TEST_CASE("gaussian-exact units have a flat base measure") {
  const ActivationSpec& lin = unit_by_name("linear");
  const double root_2pi = 2.5066282746310005;
  for (double eta : {-6.0, -1.0, 0.0, 2.0, 6.0})
    CHECK(base_measure_integral(eta, lin) ==
          doctest::Approx(root_2pi).epsilon(1e-9));
}

TEST_CASE("softplus base measure varies and hits reference values") {
  const ActivationSpec& sp = unit_by_name("softplus");
  const double expected[7] = {0.53963915133, 0.7640550619824257,
                              1.11183119485, 1.5735250472871670,
                              2.01869494191, 2.3008686822392352,
                              2.42788540583};
  for (int k = 0; k < 7; ++k) {
    double eta = -3.0 + k;
    CHECK(base_measure_integral(eta, sp) ==
          doctest::Approx(expected[k]).epsilon(1e-6));
  }
  CHECK(base_measure_integral(3.0, sp) / base_measure_integral(-3.0, sp) ==
        doctest::Approx(4.4990905493862874).epsilon(1e-6));
}

TEST_CASE("discrete supports reject the base-measure integral") {
  CHECK_THROWS_AS(base_measure_integral(0.0, unit_by_name("sigmoid")),
                  DomainError);
  CHECK_THROWS_AS(base_measure_integral(0.0, unit_by_name("poisson")),
                  DomainError);
}

TEST_CASE("softplus laplace gap shrinks as the conditional sharpens") {
  const ActivationSpec& sp = unit_by_name("softplus");
  auto tv_at = [&](double eta) {
    auto t = normalized_conditional(eta, sp);
    return tv_distance_to_gaussian(t, sp.f(eta), sp.f_prime(eta));
  };
  CHECK(tv_at(-2.0) == doctest::Approx(0.1783).epsilon(0.02));
  CHECK(tv_at(0.0) == doctest::Approx(0.0853).epsilon(0.02));
  CHECK(tv_at(2.0) == doctest::Approx(0.02281).epsilon(0.02));
  CHECK(tv_at(2.0) < tv_at(0.0));
  CHECK(tv_at(0.0) < tv_at(-2.0));
}

TEST_CASE("a non-decaying synthetic conditional fails loudly") {
  // F*(y) ~ |y| grows too slowly against the linear tilt, so exp(-D) never
  // decays on the right and the window doubling must give up.
  static ActivationSpec slow{
      "slow-tail",
      Support::ContinuousReal,
      ExactSampler::None,
      +[](double x) { return x; },
      +[](double) { return 1.0; },
      +[](double x) { return 0.5 * x * x; },
      +[](double y) { return std::sqrt(1.0 + y * y); },
      +[](double y) { return y; },
      nullptr,
      true,
      -std::numeric_limits<double>::infinity(),
      std::numeric_limits<double>::infinity(),
      -4.0,
      4.0,
      false};
  CHECK_THROWS_AS(normalized_conditional(1.0, slow), QuadratureFailure);
}

TEST_CASE("series mean reproduces the transfer on the fine grid") {
  const ActivationSpec& sp = unit_by_name("softplus");
  for (double eta : {-2.0, 0.0, 2.0, 4.0}) {
    INFO("eta=" << eta);
    CHECK(std::fabs(bernoulli_series_mean(eta, sp, 0.01, 10000) - sp.f(eta)) <
          1e-4);
  }
}

TEST_CASE("relu ensemble is the sigmoid-smoothed ramp") {
  // relu's level inverse is the identity on (0, inf), so its threshold walk
  // coincides with softplus's and the ensemble mean lands on the smoothed
  // ramp log(1 + e^eta), overshooting the hard ramp by log(1 + e^-|eta|).
  const ActivationSpec& relu = unit_by_name("relu");
  const ActivationSpec& sp = unit_by_name("softplus");
  for (double eta : {-1.0, 0.5, 3.0}) {
    INFO("eta=" << eta);
    const double m = bernoulli_series_mean(eta, relu, 0.01, 10000);
    CHECK(m == doctest::Approx(bernoulli_series_mean(eta, sp, 0.01, 10000))
                   .epsilon(1e-12));
    CHECK(m > relu.f(eta));
    CHECK(std::fabs(m - relu.f(eta)) <
          std::log1p(std::exp(-std::fabs(eta))) + 1e-3);
  }
}

TEST_CASE("series mean matches the continuum level integral") {
  // Independent of any transfer claim, the truncated mean must agree with
  // the integral it discretizes: for one-sided units
  // int_0^R sigmoid(eta - f_inv(u)) du at R = alpha * n_max.
  const ActivationSpec& requ = unit_by_name("requ");
  const double alpha = 0.02;
  const std::uint64_t n_max = 50000;
  const double reach = alpha * static_cast<double>(n_max);
  for (double eta : {1.0, 3.0}) {
    INFO("eta=" << eta);
    const double want = oracle::integrate(
        [eta](double u) { return 1.0 / (1.0 + std::exp(std::sqrt(u) - eta)); },
        0.0, reach, 1e-10);
    CHECK(bernoulli_series_mean(eta, requ, alpha, n_max) ==
          doctest::Approx(want).epsilon(2e-3));
  }
  // Antisymmetric walks are a trapezoid rule over the paired terms:
  // alpha * (g(0)/1 + sum pairs) -> int_0^R [g(u) + g(-u)] du with
  // g(u) = sigmoid(eta - f_inv(u)) - 1/2.
  const double eta = 0.5;
  const double want = oracle::integrate(
      [eta](double u) {
        const double t = std::sinh(u);
        return 1.0 / (1.0 + std::exp(t - eta)) +
               1.0 / (1.0 + std::exp(-t - eta)) - 1.0;
      },
      0.0, 6.0, 1e-12);
  CHECK(bernoulli_series_mean(eta, unit_by_name("arcsinh"), 0.01, 10000) ==
        doctest::Approx(want).epsilon(1e-3));
}

TEST_CASE("coarse series value is pinned") {
  // alpha = 1 with 50 levels: sum_{n>=1} sigmoid(1/2 - n), a fixed rounding
  // of the softplus transfer at zero.
  const ActivationSpec& sp = unit_by_name("softplus");
  CHECK(bernoulli_series_mean(0.0, sp, 1.0, 50) ==
        doctest::Approx(0.68256947896736403).epsilon(1e-13));
}

TEST_CASE("antisymmetric series stays centered") {
  const ActivationSpec& nt = unit_by_name("noisy-tanh");
  CHECK(std::fabs(bernoulli_series_mean(0.0, nt, 0.01, 10000)) < 1e-15);
  const ActivationSpec& as = unit_by_name("arcsinh");
  CHECK(std::fabs(bernoulli_series_mean(0.3, as, 0.01, 10000) +
                  bernoulli_series_mean(-0.3, as, 0.01, 10000)) < 1e-12);
}

TEST_CASE("undecayed truncation is an error") {
  // Bounded ranges exhaust their levels while the terms are still large...
  const ActivationSpec& nt = unit_by_name("noisy-tanh");
  CHECK_THROWS_AS(bernoulli_series_mean(1.0, nt, 0.01, 10000), DomainError);
  const ActivationSpec& sig = unit_by_name("sigmoid");
  CHECK_THROWS_AS(bernoulli_series_mean(0.0, sig, 0.01, 10000), DomainError);
  // ...and exponential transfers have harmonic tails no n_max can finish.
  CHECK_THROWS_AS(bernoulli_series_mean(0.5, unit_by_name("sinh"), 0.01, 10000),
                  DomainError);
  CHECK_THROWS_AS(bernoulli_series_mean(1.0, unit_by_name("exp"), 0.01, 10000),
                  DomainError);
  // Deep in the negative tail every level's term has already decayed.
  CHECK(bernoulli_series_mean(-40.0, sig, 0.01, 10000) >= 0.0);
}

TEST_CASE("series sampler is unbiased and guards its reach") {
  const ActivationSpec& sp = unit_by_name("softplus");
  RngStream rng(41, 0);
  const std::size_t n = 3000;
  double eta = 2.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += bernoulli_series_sample(eta, sp, 0.01, 10000, rng);
  double mean = acc / static_cast<double>(n);
  double se = std::sqrt(sp.f_prime(eta) / static_cast<double>(n));
  CHECK(std::fabs(mean - sp.f(eta)) < 4.0 * se);

  CHECK_THROWS_AS(bernoulli_series_sample(10.0, sp, 0.01, 100, rng),
                  TruncationBias);
}

TEST_CASE("series draws live on the level lattice") {
  const ActivationSpec& sp = unit_by_name("softplus");
  RngStream rng(43, 0);
  for (int i = 0; i < 200; ++i) {
    double y = bernoulli_series_sample(1.0, sp, 0.01, 10000, rng);
    double scaled = y / 0.01;
    CHECK(std::fabs(scaled - std::round(scaled)) < 1e-9);
    CHECK(y >= 0.0);
  }
}
