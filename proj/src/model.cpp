#include "exprbm/model.hpp"

#include <cmath>
#include <string>

#include "exprbm/errors.hpp"

namespace exprbm {

namespace {

void check_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw DomainError(std::string(what) + " has length " +
                      std::to_string(got) + ", expected " +
                      std::to_string(want));
}

void check_state(std::span<const double> v, const ActivationSpec& spec,
                 const char* what) {
  for (double x : v) {
    if (!std::isfinite(x) || !in_support_closure(spec.support, x))
      throw DomainError(std::string(what) + " value " + std::to_string(x) +
                        " outside support of unit '" +
                        std::string(spec.name) + "'");
  }
}

double sample_unit(double eta, const ActivationSpec& spec, SamplerMode mode,
                   RngStream& rng, const VarianceClamp& clamp) {
  if (mode == SamplerMode::ExactWhenAvailable &&
      spec.exact_sampler != ExactSampler::None)
    return sample_exact(eta, spec, rng);
  return sample_gaussian_approx(eta, spec, rng, clamp);
}

}  // namespace

ExpRbmModel make_model(const ActivationSpec& visible,
                       const ActivationSpec& hidden, std::size_t n_visible,
                       std::size_t n_hidden) {
  if (n_visible == 0 || n_hidden == 0)
    throw DomainError("model must have at least one unit per layer");
  ExpRbmModel m;
  m.visible = &visible;
  m.hidden = &hidden;
  m.W = Matrix(n_visible, n_hidden);
  m.b_visible.assign(n_visible, 0.0);
  m.b_hidden.assign(n_hidden, 0.0);
  return m;
}

void init_weights(ExpRbmModel& model, RngStream& rng, double scale) {
  for (std::size_t i = 0; i < model.W.size(); ++i)
    model.W.data()[i] = (2.0 * rng.uniform() - 1.0) * scale;
  std::fill(model.b_visible.begin(), model.b_visible.end(), 0.0);
  std::fill(model.b_hidden.begin(), model.b_hidden.end(), 0.0);
}

std::vector<double> hidden_input(const ExpRbmModel& m,
                                 std::span<const double> x) {
  check_dim(x.size(), m.n_visible(), "visible state");
  return matvec_transposed(m.W, x, m.b_hidden);
}

std::vector<double> visible_input(const ExpRbmModel& m,
                                  std::span<const double> y) {
  check_dim(y.size(), m.n_hidden(), "hidden state");
  return matvec(m.W, y, m.b_visible);
}

double energy(const ExpRbmModel& m, std::span<const double> x,
              std::span<const double> y) {
  check_dim(x.size(), m.n_visible(), "visible state");
  check_dim(y.size(), m.n_hidden(), "hidden state");
  check_state(x, *m.visible, "visible");
  check_state(y, *m.hidden, "hidden");
  double e = 0.0;
  for (std::size_t i = 0; i < m.n_visible(); ++i) {
    if (x[i] == 0.0) {
      e += m.visible->F_star(x[i]);
      continue;
    }
    e -= x[i] * dot(m.W.row(i), y);
    e -= m.b_visible[i] * x[i];
    e += m.visible->F_star(x[i]);
  }
  for (std::size_t j = 0; j < m.n_hidden(); ++j) {
    e -= m.b_hidden[j] * y[j];
    e += m.hidden->F_star(y[j]);
  }
  if (!std::isfinite(e))
    throw OverflowError("energy is not finite");
  return e;
}

double unnormalized_log_joint(const ExpRbmModel& m, std::span<const double> x,
                              std::span<const double> y) {
  return -energy(m, x, y);
}

std::vector<double> mean_hidden(const ExpRbmModel& m,
                                std::span<const double> x) {
  std::vector<double> eta = hidden_input(m, x);
  for (double& v : eta) v = m.hidden->f(v);
  return eta;
}

std::vector<double> mean_visible(const ExpRbmModel& m,
                                 std::span<const double> y) {
  std::vector<double> eta = visible_input(m, y);
  for (double& v : eta) v = m.visible->f(v);
  return eta;
}

std::vector<double> sample_hidden(const ExpRbmModel& m,
                                  std::span<const double> x, RngStream& rng) {
  std::vector<double> eta = hidden_input(m, x);
  for (double& v : eta)
    v = sample_unit(v, *m.hidden, m.hidden_mode, rng, m.clamp);
  return eta;
}

std::vector<double> sample_visible(const ExpRbmModel& m,
                                   std::span<const double> y, RngStream& rng) {
  std::vector<double> eta = visible_input(m, y);
  for (double& v : eta)
    v = sample_unit(v, *m.visible, m.visible_mode, rng, m.clamp);
  return eta;
}

GibbsResult gibbs_chain(const ExpRbmModel& m, std::span<const double> x0,
                        std::size_t k, RngStream& rng,
                        std::vector<std::vector<double>>* trajectory) {
  GibbsResult r;
  r.x.assign(x0.begin(), x0.end());
  r.y = sample_hidden(m, r.x, rng);
  for (std::size_t step = 0; step < k; ++step) {
    r.x = sample_visible(m, r.y, rng);
    r.y = sample_hidden(m, r.x, rng);
    if (trajectory) trajectory->push_back(r.x);
  }
  return r;
}

}  // namespace exprbm
