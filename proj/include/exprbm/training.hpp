#pragma once

#include <cstdint>
#include <vector>

#include "exprbm/linalg.hpp"
#include "exprbm/model.hpp"
#include "exprbm/rng.hpp"

namespace exprbm {

enum class PositivePhase : std::uint8_t {
  Sample = 0,  // pair each example with a sampled hidden state
  Mean = 1,    // pair each example with the hidden conditional mean
};

struct TrainConfig {
  std::size_t cd_steps = 1;
  double learning_rate = 0.01;
  double momentum = 0.0;
  std::size_t batch_size = 100;
  std::size_t epochs = 1;
  std::uint64_t seed = 0;
  PositivePhase positive_phase = PositivePhase::Sample;
  double divergence_threshold = 1e8;
  std::size_t threads = 1;
};

// Log-likelihood ascent direction estimated by contrastive divergence.
struct CdStats {
  Matrix dW;
  std::vector<double> db_visible;
  std::vector<double> db_hidden;
  // Mean squared per-entry difference between each example and its k-step
  // resample.
  double recon_error = 0.0;
};

// One CD-k pass over data rows `rows`. The example at position i samples
// from RngStream(seed, stream_base + i), so results do not depend on the
// thread count except through summation order; a fixed thread count is
// fully deterministic.
CdStats cd_gradient(const ExpRbmModel& model, const Matrix& data,
                    std::span<const std::size_t> rows, std::size_t cd_steps,
                    PositivePhase positive_phase, std::uint64_t seed,
                    std::uint64_t stream_base, std::size_t threads = 1);

// Same over all rows in order.
CdStats cd_gradient(const ExpRbmModel& model, const Matrix& data,
                    std::size_t cd_steps, PositivePhase positive_phase,
                    std::uint64_t seed, std::uint64_t stream_base,
                    std::size_t threads = 1);

struct EpochMetric {
  std::size_t epoch = 0;
  double recon_error = 0.0;
  double wall_time_s = 0.0;
};

struct TrainResult {
  std::vector<EpochMetric> epochs;
};

// Minibatch CD with momentum, updating the model in place:
//   V <- momentum * V + learning_rate * gradient;  theta <- theta + V.
// Rows are reshuffled every epoch. Throws DivergenceDetected when any
// parameter leaves [-divergence_threshold, divergence_threshold] or stops
// being finite. The caller initializes the weights.
TrainResult train(ExpRbmModel& model, const Matrix& data,
                  const TrainConfig& config);

// Persistent-chain sampler with additive fast parameters. After each
// emitted sample the fast parameters move along the difference between the
// chain statistics at the start and end of that emission's alternations:
//   fast <- fast_decay * fast + fast_rate * (start_stats - end_stats),
// which pushes the chain away from where it just was. With fast_rate = 0
// the draws reduce exactly to repeated gibbs_chain calls.
struct FpcdState {
  Matrix fast_W;
  std::vector<double> fast_b_visible;
  std::vector<double> fast_b_hidden;
  Matrix chains;  // one persistent visible state per row
};

// Emits n_samples visible states (round-robin over n_chains persistent
// chains, steps_per_sample alternations each). If state is null, chains
// start from a draw of each visible unit at its bias input and the fast
// parameters start at zero; otherwise state is used and updated in place.
Matrix rates_fpcd_generate(const ExpRbmModel& model, std::size_t n_samples,
                           std::size_t steps_per_sample, double fast_rate,
                           double fast_decay, RngStream& rng,
                           std::size_t n_chains = 1,
                           FpcdState* state = nullptr);

enum class NoiseMode : std::uint8_t {
  None = 0,
  // Perturb the fitted mean with centered Gaussian noise of variance
  // f'(eta) before forming the gradient.
  ScaledGaussian = 1,
};

struct MatchingFitResult {
  std::vector<double> weights;
  std::vector<double> loss_per_epoch;
};

// Fits targets ~ f(w . x) for a single unit by full-batch gradient descent
// on the mean matching loss; the gradient per example is
// (f(eta) [+ noise] - y) x. rng may be null when noise is NoiseMode::None.
MatchingFitResult matching_loss_fit(const Matrix& inputs,
                                    std::span<const double> targets,
                                    const ActivationSpec& spec,
                                    double learning_rate, std::size_t epochs,
                                    NoiseMode noise, RngStream* rng);

}  // namespace exprbm
