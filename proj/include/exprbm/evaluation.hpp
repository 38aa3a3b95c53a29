#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "exprbm/linalg.hpp"
#include "exprbm/model.hpp"
#include "exprbm/rng.hpp"

namespace exprbm {

// Smoothed match-kernel log density of x under a sample set:
//   log( (1/N) sum_s beta^matches(x,s) * (1-beta)^(D - matches(x,s)) ),
// where matches counts coordinates equal as doubles. beta must lie in
// (0, 1); at beta = 1/2 the result is exactly D*log(1/2) regardless of the
// samples. Computed from the match-count histogram, so duplicating the
// sample set bit-for-bit leaves the value unchanged.
double isl_log_density(std::span<const double> x, const Matrix& samples,
                       double beta);

// Mean of isl_log_density over the rows of data.
double isl_score(const Matrix& data, const Matrix& samples, double beta);

struct BetaSearchResult {
  double beta = 0.5;
  double score = 0.0;
};

// Maximizes isl_score over beta in (1/2, 1): a 601-point scan followed by a
// golden-section refinement of the best bracket.
BetaSearchResult optimize_beta(const Matrix& data, const Matrix& samples);

struct Histogram {
  std::vector<double> edges;          // bins + 1 ascending
  std::vector<std::uint64_t> counts;  // bins
  std::uint64_t underflow = 0;        // only populated with an explicit range
  std::uint64_t overflow = 0;
};

// Histogram of hidden activations over all (example, hidden unit) pairs,
// either conditional means or sampled states. Without an explicit range the
// bins span [min, max] of the observed values.
Histogram activation_histogram(
    const ExpRbmModel& model, const Matrix& data, std::size_t bins,
    bool use_mean, RngStream& rng,
    std::optional<std::pair<double, double>> range = std::nullopt);

// Hidden indices ordered by decreasing variance of their weight column;
// ties keep index order.
std::vector<std::size_t> filter_variance_ranking(const ExpRbmModel& model);

// Hidden indices ordered by decreasing variance of the conditional mean
// activation over the data; ties keep index order.
std::vector<std::size_t> filter_activation_variance_ranking(
    const ExpRbmModel& model, const Matrix& data);

// Mean squared per-entry error of a one-step stochastic reconstruction
// x -> y ~ p(y|x) -> x' ~ p(x|y).
double reconstruction_error(const ExpRbmModel& model, const Matrix& data,
                            RngStream& rng);

}  // namespace exprbm
