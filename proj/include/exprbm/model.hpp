#pragma once

#include <cstdint>
#include <vector>

#include "exprbm/activation.hpp"
#include "exprbm/linalg.hpp"
#include "exprbm/rng.hpp"
#include "exprbm/sampling.hpp"

namespace exprbm {

enum class SamplerMode : std::uint8_t {
  GaussianApprox = 0,
  // Exact conditional for units that have one, Gaussian approximation
  // otherwise.
  ExactWhenAvailable = 1,
};

// Bipartite exponential-family harmonium: visible units x (dimension I),
// hidden units y (dimension J), coupled by W (I x J) with explicit biases.
struct ExpRbmModel {
  const ActivationSpec* visible = nullptr;
  const ActivationSpec* hidden = nullptr;
  SamplerMode visible_mode = SamplerMode::ExactWhenAvailable;
  SamplerMode hidden_mode = SamplerMode::ExactWhenAvailable;
  Matrix W;  // I x J
  std::vector<double> b_visible;
  std::vector<double> b_hidden;
  VarianceClamp clamp{};

  std::size_t n_visible() const { return W.rows(); }
  std::size_t n_hidden() const { return W.cols(); }
};

ExpRbmModel make_model(const ActivationSpec& visible,
                       const ActivationSpec& hidden, std::size_t n_visible,
                       std::size_t n_hidden);

// W ~ U[-scale, scale] entrywise (row-major order), biases zero.
void init_weights(ExpRbmModel& model, RngStream& rng, double scale = 0.01);

// eta_h = W^T x + b_hidden
std::vector<double> hidden_input(const ExpRbmModel& m,
                                 std::span<const double> x);
// eta_v = W y + b_visible
std::vector<double> visible_input(const ExpRbmModel& m,
                                  std::span<const double> y);

// E(x,y) = -x^T W y - b_v.x - b_h.y + sum F*_v(x_i) + sum F*_h(y_j).
// Per-unit base-measure constants are dropped. DomainError on dimension
// mismatch or states outside the unit supports.
double energy(const ExpRbmModel& m, std::span<const double> x,
              std::span<const double> y);

double unnormalized_log_joint(const ExpRbmModel& m, std::span<const double> x,
                              std::span<const double> y);

std::vector<double> mean_hidden(const ExpRbmModel& m,
                                std::span<const double> x);
std::vector<double> mean_visible(const ExpRbmModel& m,
                                 std::span<const double> y);

std::vector<double> sample_hidden(const ExpRbmModel& m,
                                  std::span<const double> x, RngStream& rng);
std::vector<double> sample_visible(const ExpRbmModel& m,
                                   std::span<const double> y, RngStream& rng);

struct GibbsResult {
  std::vector<double> x;
  std::vector<double> y;
};

// y0 ~ p(y|x0), then k alternations x ~ p(x|y), y ~ p(y|x). If trajectory is
// non-null it receives the k sampled visible states.
GibbsResult gibbs_chain(const ExpRbmModel& m, std::span<const double> x0,
                        std::size_t k, RngStream& rng,
                        std::vector<std::vector<double>>* trajectory = nullptr);

}  // namespace exprbm
