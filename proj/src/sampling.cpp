#include "exprbm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "exprbm/errors.hpp"

namespace exprbm {

namespace {

constexpr double kTailDecay = 1e-12;
constexpr int kMaxDoublings = 8;
constexpr double kLog2Pi = 1.8378770664093454835606594;

double clamped_variance(double eta, const ActivationSpec& spec,
                        const VarianceClamp& clamp) {
  const double v = spec.f_prime(eta);
  if (std::isnan(v)) throw OverflowError("f_prime returned nan");
  return std::min(std::max(v, clamp.var_min), clamp.var_max);
}

double logsumexp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

ConditionalDensityTable discrete_table(double eta, const ActivationSpec& spec,
                                       std::vector<double> ys) {
  ConditionalDensityTable t;
  t.discrete = true;
  t.y_grid = std::move(ys);
  t.log_density.reserve(t.y_grid.size());
  for (double y : t.y_grid)
    t.log_density.push_back(conditional_log_density_unnormalized(eta, y, spec));
  t.normalizer_log = logsumexp(t.log_density);
  for (double& ld : t.log_density) ld -= t.normalizer_log;
  return t;
}

ConditionalDensityTable poisson_table(double eta, const ActivationSpec& spec,
                                      const VarianceClamp& clamp) {
  const double mean = spec.f(eta);
  const double sd = std::sqrt(clamped_variance(eta, spec, clamp));
  std::size_t y_max = static_cast<std::size_t>(std::ceil(mean + 8.0 * sd)) + 16;
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  for (int doubling = 0;; ++doubling) {
    logs.resize(y_max + 1);
    peak = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y <= y_max; ++y) {
      logs[y] = conditional_log_density_unnormalized(
          eta, static_cast<double>(y), spec);
      peak = std::max(peak, logs[y]);
    }
    if (logs[y_max] < peak + std::log(kTailDecay)) break;
    if (doubling == kMaxDoublings)
      throw QuadratureFailure("conditional mass did not decay for " +
                              std::string(spec.name));
    y_max *= 2;
  }
  ConditionalDensityTable t;
  t.discrete = true;
  t.y_grid.resize(y_max + 1);
  for (std::size_t y = 0; y <= y_max; ++y) t.y_grid[y] = static_cast<double>(y);
  t.log_density = std::move(logs);
  t.normalizer_log = logsumexp(t.log_density);
  for (double& ld : t.log_density) ld -= t.normalizer_log;
  return t;
}

ConditionalDensityTable continuous_table(double eta, const ActivationSpec& spec,
                                         std::size_t grid_size,
                                         const VarianceClamp& clamp) {
  const double mean = spec.f(eta);
  const double sd = std::sqrt(clamped_variance(eta, spec, clamp));
  const double lo_bound = support_lo(spec.support);

  // Window at least as wide as the 8-sigma coverage contract, but never so
  // narrow that a clamped variance hides an O(1) density scale.
  double half = std::max(8.0 * sd, 4.0);
  std::vector<double> ys(grid_size), logs(grid_size);
  for (int doubling = 0;; ++doubling) {
    const double lo = std::max(lo_bound, mean - half);
    const double hi = mean + half;
    const double step = (hi - lo) / static_cast<double>(grid_size - 1);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid_size; ++i) {
      ys[i] = lo + step * static_cast<double>(i);
      logs[i] = conditional_log_density_unnormalized(eta, ys[i], spec);
      peak = std::max(peak, logs[i]);
    }
    const double cut = peak + std::log(kTailDecay);
    const bool left_ok = (lo == lo_bound) || logs.front() < cut;
    const bool right_ok = logs.back() < cut;
    if (left_ok && right_ok) break;
    if (doubling == kMaxDoublings)
      throw QuadratureFailure("conditional density did not decay for " +
                              std::string(spec.name));
    half *= 2.0;
  }

  // log of the trapezoid integral of exp(logs) on the grid.
  double peak = *std::max_element(logs.begin(), logs.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < grid_size; ++i)
    acc += 0.5 * (std::exp(logs[i] - peak) + std::exp(logs[i + 1] - peak)) *
           (ys[i + 1] - ys[i]);
  ConditionalDensityTable t;
  t.discrete = false;
  t.normalizer_log = peak + std::log(acc);
  t.y_grid = std::move(ys);
  t.log_density = std::move(logs);
  for (double& ld : t.log_density) ld -= t.normalizer_log;
  return t;
}

}  // namespace

double sample_gaussian_approx(double eta, const ActivationSpec& spec,
                              RngStream& rng, const VarianceClamp& clamp) {
  const double mean = spec.f(eta);
  if (!std::isfinite(mean))
    throw OverflowError("sample_gaussian_approx: f(eta) overflowed");
  const double raw = spec.f_prime(eta);
  if (std::isnan(raw)) throw OverflowError("f_prime returned nan");
  double y;
  if (raw < clamp.var_min) {
    y = mean;  // degenerate conditional; no randomness consumed
  } else {
    const double var = std::min(raw, clamp.var_max);
    y = mean + std::sqrt(var) * rng.normal();
  }
  if (spec.support == Support::ContinuousNonneg && y < 0.0) y = 0.0;
  return y;
}

namespace detail {

std::int64_t poisson_knuth(double lambda, RngStream& rng) {
  const double limit = std::exp(-lambda);
  std::int64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= rng.uniform_pos();
  } while (p > limit);
  return k - 1;
}

std::int64_t poisson_normal(double lambda, RngStream& rng) {
  const double g = lambda + std::sqrt(lambda) * rng.normal();
  return g <= 0.0 ? 0 : static_cast<std::int64_t>(std::llround(g));
}

}  // namespace detail

double sample_exact(double eta, const ActivationSpec& spec, RngStream& rng) {
  switch (spec.exact_sampler) {
    case ExactSampler::Bernoulli: {
      const double b = rng.bernoulli(sigmoid(eta)) ? 1.0 : 0.0;
      return spec.support == Support::BinaryPM ? b - 0.5 : b;
    }
    case ExactSampler::Gaussian:
      return spec.f(eta) + rng.normal();
    case ExactSampler::Poisson: {
      const double lambda = std::exp(eta);
      if (!std::isfinite(lambda))
        throw OverflowError("sample_exact: poisson rate overflowed");
      return static_cast<double>(lambda <= 30.0
                                     ? detail::poisson_knuth(lambda, rng)
                                     : detail::poisson_normal(lambda, rng));
    }
    case ExactSampler::None:
      break;
  }
  throw UnsupportedExactSampler("no exact sampler for " +
                                std::string(spec.name));
}

ConditionalDensityTable normalized_conditional(double eta,
                                               const ActivationSpec& spec,
                                               std::size_t grid_size,
                                               const VarianceClamp& clamp) {
  if (grid_size < 64) throw DomainError("normalized_conditional: grid_size < 64");
  switch (spec.support) {
    case Support::Binary01:
      return discrete_table(eta, spec, {0.0, 1.0});
    case Support::BinaryPM:
      return discrete_table(eta, spec, {-0.5, 0.5});
    case Support::NonnegInteger:
      return poisson_table(eta, spec, clamp);
    default:
      return continuous_table(eta, spec, grid_size, clamp);
  }
}

double base_measure_integral(double eta, const ActivationSpec& spec,
                             std::size_t grid_size,
                             const VarianceClamp& clamp) {
  if (!support_is_continuous(spec.support))
    throw DomainError("base_measure_integral: support of " +
                      std::string(spec.name) + " is not continuous");
  return std::exp(
      normalized_conditional(eta, spec, grid_size, clamp).normalizer_log);
}

namespace {

double series_threshold(const ActivationSpec& spec, double level) {
  return spec.series_inv != nullptr ? spec.series_inv(level)
                                    : spec.f_inv(level);
}

// One-sided units are {0,1}-valued with success probability
// sigmoid(eta - tau_n) at levels alpha*(n - 1/2); antisymmetric units are
// {-1/2,+1/2}-valued ("center") at levels alpha*n over n = -n_max..n_max.
// term01 maps a one-sided unit's p to its contribution, center likewise for
// a +-1/2 unit; both lambdas are where mean vs. draw differ.
template <typename Term01, typename Center>
double series_walk(double eta, const ActivationSpec& spec, double alpha,
                   std::uint64_t n_max, Term01&& term01, Center&& center) {
  if (!(alpha > 0.0)) throw DomainError("bernoulli series: alpha must be > 0");
  if (n_max == 0) throw DomainError("bernoulli series: n_max must be > 0");
  // Terms decrease along the walk, so a decayed final term bounds the whole
  // discarded tail; a non-decayed one means the truncated ensemble is
  // biased (for exp-like transfers the tail decays only harmonically and no
  // feasible n_max converges), which must not pass silently.
  auto require_decayed = [&spec](double last) {
    if (std::fabs(last) >= kTailDecay)
      throw DomainError("bernoulli series: levels exhausted for " +
                        std::string(spec.name) +
                        " before the terms decayed");
  };
  double acc = 0.0;
  if (spec.antisymmetric) {
    acc += center(sigmoid(eta - series_threshold(spec, 0.0)));
    double last = 1.0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      const double level = alpha * static_cast<double>(n);
      if (level >= spec.range_hi) {
        require_decayed(last);
        last = 0.0;
        break;
      }
      const double p_plus = sigmoid(eta - series_threshold(spec, level));
      const double p_minus = sigmoid(eta - series_threshold(spec, -level));
      last = p_plus + p_minus - 1.0;
      acc += center(p_plus);
      acc += center(p_minus);
    }
    require_decayed(last);
  } else {
    double last = 1.0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      const double level = alpha * (static_cast<double>(n) - 0.5);
      if (level >= spec.range_hi) {
        require_decayed(last);
        last = 0.0;
        break;
      }
      last = sigmoid(eta - series_threshold(spec, level));
      acc += term01(last);
    }
    require_decayed(last);
  }
  return alpha * acc;
}

}  // namespace

double bernoulli_series_mean(double eta, const ActivationSpec& spec,
                             double alpha, std::uint64_t n_max) {
  return series_walk(
      eta, spec, alpha, n_max, [](double p) { return p; },
      [](double p) { return p - 0.5; });
}

double bernoulli_series_sample(double eta, const ActivationSpec& spec,
                               double alpha, std::uint64_t n_max,
                               RngStream& rng) {
  const double mean = spec.f(eta);
  const double fp = spec.f_prime(eta);
  const double reach = alpha * static_cast<double>(n_max);
  const double need = std::fabs(mean) - 5.0 * std::sqrt(std::max(fp, 0.0));
  if (std::isfinite(mean) && reach < need)
    throw TruncationBias("bernoulli series: alpha*n_max = " +
                         std::to_string(reach) + " cannot reach f(eta)");
  return series_walk(
      eta, spec, alpha, n_max,
      [&rng](double p) { return rng.bernoulli(p) ? 1.0 : 0.0; },
      [&rng](double p) { return rng.bernoulli(p) ? 0.5 : -0.5; });
}

double gaussian_log_pdf(double y, double mean, double var) {
  const double d = y - mean;
  return -0.5 * (d * d / var + std::log(var) + kLog2Pi);
}

double tv_distance_to_gaussian(const ConditionalDensityTable& table,
                               double mean, double var) {
  double acc = 0.0;
  if (table.discrete) {
    for (std::size_t i = 0; i < table.y_grid.size(); ++i)
      acc += std::fabs(std::exp(table.log_density[i]) -
                       std::exp(gaussian_log_pdf(table.y_grid[i], mean, var)));
    return 0.5 * acc;
  }
  auto diff = [&](std::size_t i) {
    return std::fabs(std::exp(table.log_density[i]) -
                     std::exp(gaussian_log_pdf(table.y_grid[i], mean, var)));
  };
  for (std::size_t i = 0; i + 1 < table.y_grid.size(); ++i)
    acc += 0.5 * (diff(i) + diff(i + 1)) * (table.y_grid[i + 1] - table.y_grid[i]);
  return 0.5 * acc;
}

}  // namespace exprbm
