#include "exprbm/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "exprbm/errors.hpp"

namespace exprbm {

namespace {

void zero_stats(CdStats& s, std::size_t n_visible, std::size_t n_hidden) {
  s.dW = Matrix(n_visible, n_hidden);
  s.db_visible.assign(n_visible, 0.0);
  s.db_hidden.assign(n_hidden, 0.0);
  s.recon_error = 0.0;
}

// Accumulates raw (unnormalized) statistics for rows[begin..end).
void cd_worker(const ExpRbmModel& model, const Matrix& data,
               std::span<const std::size_t> rows, std::size_t begin,
               std::size_t end, std::size_t cd_steps,
               PositivePhase positive_phase, std::uint64_t seed,
               std::uint64_t stream_base, CdStats& out) {
  zero_stats(out, model.n_visible(), model.n_hidden());
  std::vector<double> x_neg, y_neg;
  for (std::size_t i = begin; i < end; ++i) {
    RngStream rng(seed, stream_base + i);
    std::span<const double> x = data.row(rows[i]);
    // Draw order mirrors gibbs_chain so the two consume the stream
    // identically.
    std::vector<double> y0 = sample_hidden(model, x, rng);
    x_neg.assign(x.begin(), x.end());
    y_neg = y0;
    for (std::size_t step = 0; step < cd_steps; ++step) {
      x_neg = sample_visible(model, y_neg, rng);
      y_neg = sample_hidden(model, x_neg, rng);
    }
    std::span<const double> y_pos = y0;
    std::vector<double> y_mean;
    if (positive_phase == PositivePhase::Mean) {
      y_mean = mean_hidden(model, x);
      y_pos = y_mean;
    }
    add_outer(out.dW, x, y_pos, 1.0);
    add_outer(out.dW, x_neg, y_neg, -1.0);
    for (std::size_t v = 0; v < x.size(); ++v) {
      out.db_visible[v] += x[v] - x_neg[v];
      double d = x[v] - x_neg[v];
      out.recon_error += d * d;
    }
    for (std::size_t h = 0; h < y_neg.size(); ++h)
      out.db_hidden[h] += y_pos[h] - y_neg[h];
  }
}

void fisher_yates(std::vector<std::size_t>& order, RngStream& rng) {
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::size_t j = static_cast<std::size_t>(rng.uniform_below(i + 1));
    std::swap(order[i], order[j]);
  }
}

void check_parameters_bounded(const ExpRbmModel& model, double bound,
                              std::size_t epoch) {
  auto bad = [bound](double v) {
    return !std::isfinite(v) || std::abs(v) > bound;
  };
  bool diverged = std::any_of(model.W.data(), model.W.data() + model.W.size(),
                              bad) ||
                  std::any_of(model.b_visible.begin(), model.b_visible.end(),
                              bad) ||
                  std::any_of(model.b_hidden.begin(), model.b_hidden.end(),
                              bad);
  if (diverged)
    throw DivergenceDetected("parameters left [-" + std::to_string(bound) +
                             ", " + std::to_string(bound) + "] at epoch " +
                             std::to_string(epoch));
}

}  // namespace

CdStats cd_gradient(const ExpRbmModel& model, const Matrix& data,
                    std::span<const std::size_t> rows, std::size_t cd_steps,
                    PositivePhase positive_phase, std::uint64_t seed,
                    std::uint64_t stream_base, std::size_t threads) {
  if (data.cols() != model.n_visible())
    throw DomainError("data width does not match the visible layer");
  if (rows.empty())
    throw DomainError("cd_gradient needs at least one example");
  if (cd_steps == 0)
    throw DomainError("cd_steps must be at least 1");
  if (threads == 0)
    throw DomainError("thread count must be positive");
  for (std::size_t r : rows)
    if (r >= data.rows())
      throw DomainError("row index out of range");

  std::size_t n = rows.size();
  threads = std::min(threads, n);

  std::vector<CdStats> partials(threads);
  if (threads == 1) {
    cd_worker(model, data, rows, 0, n, cd_steps, positive_phase, seed,
              stream_base, partials[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      std::size_t begin = n * t / threads;
      std::size_t end = n * (t + 1) / threads;
      pool.emplace_back(cd_worker, std::cref(model), std::cref(data), rows,
                        begin, end, cd_steps, positive_phase, seed,
                        stream_base, std::ref(partials[t]));
    }
    for (std::thread& th : pool) th.join();
  }

  // Chunk-ordered reduction keeps a given thread count deterministic.
  CdStats total = std::move(partials[0]);
  for (std::size_t t = 1; t < threads; ++t) {
    for (std::size_t i = 0; i < total.dW.size(); ++i)
      total.dW.data()[i] += partials[t].dW.data()[i];
    for (std::size_t v = 0; v < total.db_visible.size(); ++v)
      total.db_visible[v] += partials[t].db_visible[v];
    for (std::size_t h = 0; h < total.db_hidden.size(); ++h)
      total.db_hidden[h] += partials[t].db_hidden[h];
    total.recon_error += partials[t].recon_error;
  }

  double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < total.dW.size(); ++i)
    total.dW.data()[i] *= inv_n;
  for (double& v : total.db_visible) v *= inv_n;
  for (double& v : total.db_hidden) v *= inv_n;
  total.recon_error *= inv_n / static_cast<double>(model.n_visible());
  return total;
}

CdStats cd_gradient(const ExpRbmModel& model, const Matrix& data,
                    std::size_t cd_steps, PositivePhase positive_phase,
                    std::uint64_t seed, std::uint64_t stream_base,
                    std::size_t threads) {
  std::vector<std::size_t> rows(data.rows());
  std::iota(rows.begin(), rows.end(), 0);
  return cd_gradient(model, data, rows, cd_steps, positive_phase, seed,
                     stream_base, threads);
}

TrainResult train(ExpRbmModel& model, const Matrix& data,
                  const TrainConfig& config) {
  if (data.rows() == 0)
    throw DomainError("cannot train on an empty dataset");
  if (data.cols() != model.n_visible())
    throw DomainError("data width does not match the visible layer");
  if (config.batch_size == 0)
    throw DomainError("batch size must be positive");
  if (!(config.divergence_threshold > 0.0))
    throw DomainError("divergence threshold must be positive");
  if (!(config.momentum >= 0.0 && config.momentum < 1.0))
    throw DomainError("momentum must lie in [0, 1)");
  if (!std::isfinite(config.learning_rate) || config.learning_rate < 0.0)
    throw DomainError("learning rate must be finite and nonnegative");

  std::size_t n = data.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  RngStream shuffle_rng(config.seed, kShuffleStream);

  Matrix vel_W(model.n_visible(), model.n_hidden());
  std::vector<double> vel_bv(model.n_visible(), 0.0);
  std::vector<double> vel_bh(model.n_hidden(), 0.0);

  TrainResult result;
  result.epochs.reserve(config.epochs);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    auto t0 = std::chrono::steady_clock::now();
    fisher_yates(order, shuffle_rng);
    double recon_sum = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      std::size_t count = std::min(config.batch_size, n - start);
      std::span<const std::size_t> rows(order.data() + start, count);
      CdStats stats = cd_gradient(
          model, data, rows, config.cd_steps, config.positive_phase,
          config.seed,
          kExampleStreamBase + static_cast<std::uint64_t>(epoch) * n + start,
          config.threads);

      for (std::size_t i = 0; i < vel_W.size(); ++i) {
        vel_W.data()[i] = config.momentum * vel_W.data()[i] +
                          config.learning_rate * stats.dW.data()[i];
        model.W.data()[i] += vel_W.data()[i];
      }
      for (std::size_t v = 0; v < vel_bv.size(); ++v) {
        vel_bv[v] = config.momentum * vel_bv[v] +
                    config.learning_rate * stats.db_visible[v];
        model.b_visible[v] += vel_bv[v];
      }
      for (std::size_t h = 0; h < vel_bh.size(); ++h) {
        vel_bh[h] = config.momentum * vel_bh[h] +
                    config.learning_rate * stats.db_hidden[h];
        model.b_hidden[h] += vel_bh[h];
      }
      check_parameters_bounded(model, config.divergence_threshold, epoch);
      recon_sum += stats.recon_error * static_cast<double>(count);
    }
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    result.epochs.push_back(
        {epoch, recon_sum / static_cast<double>(n), dt.count()});
  }
  return result;
}

Matrix rates_fpcd_generate(const ExpRbmModel& model, std::size_t n_samples,
                           std::size_t steps_per_sample, double fast_rate,
                           double fast_decay, RngStream& rng,
                           std::size_t n_chains, FpcdState* state) {
  if (n_chains == 0)
    throw DomainError("need at least one chain");
  if (steps_per_sample == 0)
    throw DomainError("steps_per_sample must be at least 1");
  if (!std::isfinite(fast_rate) || !std::isfinite(fast_decay) ||
      fast_decay < 0.0 || fast_decay > 1.0)
    throw DomainError("fast_decay must lie in [0, 1] and fast_rate must be "
                      "finite");

  std::size_t I = model.n_visible();
  std::size_t J = model.n_hidden();

  FpcdState local;
  FpcdState& st = state ? *state : local;
  if (st.chains.rows() == 0) {
    st.fast_W = Matrix(I, J);
    st.fast_b_visible.assign(I, 0.0);
    st.fast_b_hidden.assign(J, 0.0);
    st.chains = Matrix(n_chains, I);
    std::vector<double> y_zero(J, 0.0);
    for (std::size_t c = 0; c < n_chains; ++c) {
      std::vector<double> x0 = sample_visible(model, y_zero, rng);
      std::copy(x0.begin(), x0.end(), st.chains.row(c).begin());
    }
  } else if (st.chains.rows() != n_chains || st.chains.cols() != I ||
             st.fast_W.rows() != I || st.fast_W.cols() != J ||
             st.fast_b_visible.size() != I || st.fast_b_hidden.size() != J) {
    throw DomainError("persistent state does not match the model/chain "
                      "configuration");
  }

  ExpRbmModel eff = model;
  Matrix out(n_samples, I);
  std::vector<double> x0(I);
  for (std::size_t s = 0; s < n_samples; ++s) {
    std::size_t c = s % n_chains;
    for (std::size_t i = 0; i < eff.W.size(); ++i)
      eff.W.data()[i] = model.W.data()[i] + st.fast_W.data()[i];
    for (std::size_t v = 0; v < I; ++v)
      eff.b_visible[v] = model.b_visible[v] + st.fast_b_visible[v];
    for (std::size_t h = 0; h < J; ++h)
      eff.b_hidden[h] = model.b_hidden[h] + st.fast_b_hidden[h];

    std::span<const double> chain = st.chains.row(c);
    std::copy(chain.begin(), chain.end(), x0.begin());
    std::vector<double> y_start = sample_hidden(eff, x0, rng);
    std::vector<double> x = x0;
    std::vector<double> y = y_start;
    for (std::size_t step = 0; step < steps_per_sample; ++step) {
      x = sample_visible(eff, y, rng);
      y = sample_hidden(eff, x, rng);
    }

    std::copy(x.begin(), x.end(), out.row(s).begin());
    std::copy(x.begin(), x.end(), st.chains.row(c).begin());

    for (std::size_t v = 0; v < I; ++v)
      for (std::size_t h = 0; h < J; ++h)
        st.fast_W(v, h) = fast_decay * st.fast_W(v, h) +
                          fast_rate * (x0[v] * y_start[h] - x[v] * y[h]);
    for (std::size_t v = 0; v < I; ++v)
      st.fast_b_visible[v] = fast_decay * st.fast_b_visible[v] +
                             fast_rate * (x0[v] - x[v]);
    for (std::size_t h = 0; h < J; ++h)
      st.fast_b_hidden[h] = fast_decay * st.fast_b_hidden[h] +
                            fast_rate * (y_start[h] - y[h]);
  }
  return out;
}

MatchingFitResult matching_loss_fit(const Matrix& inputs,
                                    std::span<const double> targets,
                                    const ActivationSpec& spec,
                                    double learning_rate, std::size_t epochs,
                                    NoiseMode noise, RngStream* rng) {
  if (inputs.rows() == 0)
    throw DomainError("cannot fit on an empty dataset");
  if (inputs.rows() != targets.size())
    throw DomainError("target count does not match the input rows");
  if (noise == NoiseMode::ScaledGaussian && rng == nullptr)
    throw DomainError("noisy fitting needs a random stream");

  std::size_t n = inputs.rows();
  std::size_t d = inputs.cols();
  MatchingFitResult result;
  result.weights.assign(d, 0.0);
  result.loss_per_epoch.reserve(epochs);

  std::vector<double> grad(d);
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::span<const double> x = inputs.row(i);
      double eta = dot(result.weights, x);
      loss += matching_loss(eta, targets[i], spec);
      double err = spec.f(eta) - targets[i];
      if (noise == NoiseMode::ScaledGaussian) {
        double v = std::max(spec.f_prime(eta), 0.0);
        err += rng->normal() * std::sqrt(v);
      }
      for (std::size_t j = 0; j < d; ++j) grad[j] += err * x[j];
    }
    double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < d; ++j)
      result.weights[j] -= learning_rate * grad[j] * inv_n;
    result.loss_per_epoch.push_back(loss * inv_n);
    if (!std::isfinite(result.loss_per_epoch.back()))
      throw DivergenceDetected("matching loss became non-finite at epoch " +
                               std::to_string(epoch));
  }
  return result;
}

}  // namespace exprbm
