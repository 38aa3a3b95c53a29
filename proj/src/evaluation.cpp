#include "exprbm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "exprbm/errors.hpp"

namespace exprbm {

namespace {

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw DomainError("beta must lie strictly between 0 and 1");
}

// counts[m] = number of samples sharing exactly m coordinates with x.
std::vector<std::uint64_t> match_histogram(std::span<const double> x,
                                           const Matrix& samples) {
  std::vector<std::uint64_t> counts(x.size() + 1, 0);
  for (std::size_t s = 0; s < samples.rows(); ++s) {
    std::span<const double> row = samples.row(s);
    std::size_t m = 0;
    for (std::size_t d = 0; d < x.size(); ++d)
      if (x[d] == row[d]) ++m;
    ++counts[m];
  }
  return counts;
}

// log( (1/N) sum_m counts[m] * beta^m (1-beta)^(D-m) ), evaluated at the
// histogram level: integer weights, one shared scaling, one division. This
// keeps the value bit-identical under exact duplication of the sample set
// (counts and N both double; the doubled sum and doubled N scale by a power
// of two, so the quotient rounds the same way).
double isl_from_histogram(const std::vector<std::uint64_t>& counts,
                          std::uint64_t n_samples, double beta) {
  std::size_t dims = counts.size() - 1;
  // 1 - beta is exact for beta >= 1/2 and harmless below it.
  double log_miss = std::log(1.0 - beta);
  double logit = std::log(beta) - log_miss;
  double base = static_cast<double>(dims) * log_miss;

  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m <= dims; ++m) {
    if (counts[m] == 0) continue;
    peak = std::max(peak, static_cast<double>(m) * logit + base);
  }
  double sum = 0.0;
  for (std::size_t m = 0; m <= dims; ++m) {
    if (counts[m] == 0) continue;
    double level = static_cast<double>(m) * logit + base;
    sum += static_cast<double>(counts[m]) * std::exp(level - peak);
  }
  return peak + std::log(sum / static_cast<double>(n_samples));
}

void check_pair(const Matrix& data, const Matrix& samples) {
  if (samples.rows() == 0)
    throw DomainError("need at least one sample");
  if (data.rows() == 0)
    throw DomainError("need at least one query row");
  if (data.cols() != samples.cols())
    throw DomainError("query and sample dimensionality differ");
}

double population_variance(std::span<const double> v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size());
}

std::vector<std::size_t> ranking_by_descending(
    const std::vector<double>& score) {
  std::vector<std::size_t> order(score.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&score](std::size_t a, std::size_t b) {
                     return score[a] > score[b];
                   });
  return order;
}

}  // namespace

double isl_log_density(std::span<const double> x, const Matrix& samples,
                       double beta) {
  check_beta(beta);
  if (samples.rows() == 0)
    throw DomainError("need at least one sample");
  if (x.size() != samples.cols())
    throw DomainError("query and sample dimensionality differ");
  return isl_from_histogram(match_histogram(x, samples), samples.rows(),
                            beta);
}

double isl_score(const Matrix& data, const Matrix& samples, double beta) {
  check_beta(beta);
  check_pair(data, samples);
  double acc = 0.0;
  for (std::size_t r = 0; r < data.rows(); ++r)
    acc += isl_log_density(data.row(r), samples, beta);
  return acc / static_cast<double>(data.rows());
}

BetaSearchResult optimize_beta(const Matrix& data, const Matrix& samples) {
  check_pair(data, samples);
  // Precompute the per-row match histograms once; every beta evaluation is
  // then O(rows * dims).
  std::vector<std::vector<std::uint64_t>> histograms;
  histograms.reserve(data.rows());
  for (std::size_t r = 0; r < data.rows(); ++r)
    histograms.push_back(match_histogram(data.row(r), samples));

  std::uint64_t n = samples.rows();
  auto score_at = [&](double beta) {
    double acc = 0.0;
    for (const auto& h : histograms) acc += isl_from_histogram(h, n, beta);
    return acc / static_cast<double>(histograms.size());
  };

  const double lo = 0.5 + 1e-6;
  const double hi = 1.0 - 1e-6;
  const std::size_t points = 601;
  double best_beta = lo;
  double best_score = -std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < points; ++i) {
    double beta = lo + (hi - lo) * static_cast<double>(i) /
                           static_cast<double>(points - 1);
    double s = score_at(beta);
    if (s > best_score) {
      best_score = s;
      best_beta = beta;
      best_idx = i;
    }
  }

  // Golden-section refinement inside the bracket around the scan winner.
  double step = (hi - lo) / static_cast<double>(points - 1);
  double a = best_idx == 0 ? lo : best_beta - step;
  double b = best_idx == points - 1 ? hi : best_beta + step;
  const double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = score_at(c);
  double fd = score_at(d);
  while (b - a > 1e-5) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = score_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = score_at(d);
    }
  }
  double mid = 0.5 * (a + b);
  double fm = score_at(mid);
  if (fm > best_score) return {mid, fm};
  return {best_beta, best_score};
}

Histogram activation_histogram(
    const ExpRbmModel& model, const Matrix& data, std::size_t bins,
    bool use_mean, RngStream& rng,
    std::optional<std::pair<double, double>> range) {
  if (bins == 0)
    throw DomainError("need at least one bin");
  if (data.rows() == 0)
    throw DomainError("need at least one example");
  if (data.cols() != model.n_visible())
    throw DomainError("data width does not match the visible layer");

  std::vector<double> values;
  values.reserve(data.rows() * model.n_hidden());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    std::vector<double> h = use_mean ? mean_hidden(model, data.row(r))
                                     : sample_hidden(model, data.row(r), rng);
    values.insert(values.end(), h.begin(), h.end());
  }

  double lo, hi;
  if (range) {
    lo = range->first;
    hi = range->second;
    if (!(lo < hi))
      throw DomainError("histogram range must be increasing");
  } else {
    lo = *std::min_element(values.begin(), values.end());
    hi = *std::max_element(values.begin(), values.end());
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
  }

  Histogram out;
  out.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k)
    out.edges[k] =
        lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
  out.counts.assign(bins, 0);
  for (double v : values) {
    if (v < lo) {
      ++out.underflow;
      continue;
    }
    if (v > hi) {
      ++out.overflow;
      continue;
    }
    std::size_t idx =
        v >= hi ? bins - 1
                : static_cast<std::size_t>((v - lo) / (hi - lo) *
                                           static_cast<double>(bins));
    if (idx >= bins) idx = bins - 1;
    ++out.counts[idx];
  }
  return out;
}

std::vector<std::size_t> filter_variance_ranking(const ExpRbmModel& model) {
  std::vector<double> score(model.n_hidden());
  std::vector<double> column(model.n_visible());
  for (std::size_t j = 0; j < model.n_hidden(); ++j) {
    for (std::size_t i = 0; i < model.n_visible(); ++i) column[i] = model.W(i, j);
    score[j] = population_variance(column);
  }
  return ranking_by_descending(score);
}

std::vector<std::size_t> filter_activation_variance_ranking(
    const ExpRbmModel& model, const Matrix& data) {
  if (data.rows() == 0)
    throw DomainError("need at least one example");
  if (data.cols() != model.n_visible())
    throw DomainError("data width does not match the visible layer");
  Matrix acts(data.rows(), model.n_hidden());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    std::vector<double> h = mean_hidden(model, data.row(r));
    std::copy(h.begin(), h.end(), acts.row(r).begin());
  }
  std::vector<double> score(model.n_hidden());
  std::vector<double> column(data.rows());
  for (std::size_t j = 0; j < model.n_hidden(); ++j) {
    for (std::size_t r = 0; r < data.rows(); ++r) column[r] = acts(r, j);
    score[j] = population_variance(column);
  }
  return ranking_by_descending(score);
}

double reconstruction_error(const ExpRbmModel& model, const Matrix& data,
                            RngStream& rng) {
  if (data.rows() == 0)
    throw DomainError("need at least one example");
  if (data.cols() != model.n_visible())
    throw DomainError("data width does not match the visible layer");
  double acc = 0.0;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    std::span<const double> x = data.row(r);
    std::vector<double> y = sample_hidden(model, x, rng);
    std::vector<double> xr = sample_visible(model, y, rng);
    for (std::size_t i = 0; i < x.size(); ++i)
      acc += (x[i] - xr[i]) * (x[i] - xr[i]);
  }
  return acc / static_cast<double>(data.rows() * data.cols());
}

}  // namespace exprbm
