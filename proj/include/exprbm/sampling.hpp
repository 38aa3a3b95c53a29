#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "exprbm/activation.hpp"
#include "exprbm/rng.hpp"

namespace exprbm {

// Clamp window for the approximate conditional's variance f'(eta). Below
// var_min the conditional is treated as degenerate at the mean; above
// var_max it is capped.
struct VarianceClamp {
  double var_min = 1e-12;
  double var_max = 1e6;
};

// One draw from the Laplace-approximate conditional N(f(eta), f'(eta)).
// ContinuousNonneg supports clamp the draw at 0; discrete supports get the
// raw real value (no rounding). When f'(eta) < var_min the conditional
// degenerates and f(eta) is returned without consuming randomness.
double sample_gaussian_approx(double eta, const ActivationSpec& spec,
                              RngStream& rng, const VarianceClamp& clamp = {});

// Exact conditional draw for units that have one (Bernoulli, Gaussian,
// Poisson); UnsupportedExactSampler otherwise.
double sample_exact(double eta, const ActivationSpec& spec, RngStream& rng);

namespace detail {
// Product-of-uniforms sampler, exact for small lambda.
std::int64_t poisson_knuth(double lambda, RngStream& rng);
// Rounded N(lambda, lambda) truncated at 0; the large-lambda branch.
std::int64_t poisson_normal(double lambda, RngStream& rng);
}  // namespace detail

// Tabulated normalized conditional p(y|eta) on a grid (continuous supports)
// or the full probability mass table (binary / nonnegative-integer supports).
struct ConditionalDensityTable {
  std::vector<double> y_grid;
  std::vector<double> log_density;  // normalized
  double normalizer_log;            // log integral (or sum) of exp(-D)
  bool discrete;
};

// Trapezoid quadrature of exp(-D_f(eta || y)) on a window centered at f(eta),
// range-doubled until the tails decay below 1e-12 of the peak (at most 8
// doublings, then QuadratureFailure). Discrete supports are summed instead.
ConditionalDensityTable normalized_conditional(double eta,
                                               const ActivationSpec& spec,
                                               std::size_t grid_size = 2048,
                                               const VarianceClamp& clamp = {});

// Integral over the support of exp(-D_f(eta || y)); continuous supports only.
// Constant in eta exactly when the unit's Gaussian approximation is exact.
double base_measure_integral(double eta, const ActivationSpec& spec,
                             std::size_t grid_size = 2048,
                             const VarianceClamp& clamp = {});

// Truncated Bernoulli-ensemble mean: alpha * sum of sigmoid(eta - tau_n) over
// the level grid alpha*(n - 1/2) (one-sided units), or the tanh variant with
// levels alpha*n over n = -n_max..n_max (antisymmetric units). DomainError if
// the walk ends -- by leaving ran(f) or by running out of levels -- before
// the terms have decayed below 1e-12, since the truncated mean would then
// carry an unbounded bias.
double bernoulli_series_mean(double eta, const ActivationSpec& spec,
                             double alpha, std::uint64_t n_max);

// Draws each ensemble member and returns alpha times the (signed) success
// count. TruncationBias if alpha*n_max cannot reach f(eta) - 5 sqrt(f'(eta)).
double bernoulli_series_sample(double eta, const ActivationSpec& spec,
                               double alpha, std::uint64_t n_max,
                               RngStream& rng);

// Helpers shared by verification paths.
double gaussian_log_pdf(double y, double mean, double var);

// Total variation distance between the table and N(mean, var), evaluated on
// the table's own grid (trapezoid for continuous tables, half L1 for mass
// tables).
double tv_distance_to_gaussian(const ConditionalDensityTable& table,
                               double mean, double var);

}  // namespace exprbm
