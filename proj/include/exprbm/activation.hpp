#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace exprbm {

enum class Support : std::uint8_t {
  ContinuousReal,
  ContinuousNonneg,
  Binary01,
  BinaryPM,  // {-0.5, +0.5}
  NonnegInteger,
};

enum class ExactSampler : std::uint8_t { None, Bernoulli, Gaussian, Poisson };

// One catalog entry. A unit is fully specified by its mean function f; the
// rest is derived: f_prime analytically (never transcribed from a table),
// F an antiderivative of f, F_star an antiderivative of f_inv, with constants
// fixed so that F(eta) + F_star(f(eta)) == eta * f(eta) identically.
//
// Adding a unit means adding one row to the table in activation.cpp.
struct ActivationSpec {
  std::string_view name;
  Support support;
  ExactSampler exact_sampler;

  double (*f)(double);
  double (*f_prime)(double);
  double (*F)(double);
  double (*F_star)(double);
  double (*f_inv)(double);

  // Level-to-threshold map for the Bernoulli-ensemble series; nullptr means
  // f_inv. Softplus overrides this with the identity: it is the smoothed
  // ReLU, and its exact sigmoid decomposition has uniformly spaced biases.
  double (*series_inv)(double);

  bool antisymmetric;    // f(-eta) == -f(eta)
  double range_lo, range_hi;  // closure of ran(f)

  // Interval on which f_inv(f(eta)) is numerically tight; test and
  // verification grids are drawn from here. exclude_zero marks a kink or a
  // derivative singularity at eta == 0.
  double eta_lo, eta_hi;
  bool exclude_zero;
};

std::span<const ActivationSpec> catalog();

// DomainError if the name is not in the catalog.
const ActivationSpec& unit_by_name(std::string_view name);

// Support-closure membership (convex hull: Binary01 -> [0,1], BinaryPM ->
// [-1/2,1/2], NonnegInteger -> [0,inf)).
bool in_support_closure(Support s, double y);
double support_lo(Support s);
double support_hi(Support s);
bool support_is_continuous(Support s);

// D_f(eta || y) = -eta*y + F(eta) + F_star(y). Nonnegative, zero iff
// y == f(eta). DomainError if y is outside the support closure;
// OverflowError if the value fails to be finite.
double bregman_divergence(double eta, double y, const ActivationSpec& spec);

// log p~(y | eta) = -D_f(eta || y); the per-unit base measure is a constant
// dropped here (normalizers are computed numerically where needed).
double conditional_log_density_unnormalized(double eta, double y,
                                            const ActivationSpec& spec);

// The matching loss is the Bregman divergence read as a loss in eta; its
// eta-gradient is f(eta) - y_target.
double matching_loss(double eta, double y_target, const ActivationSpec& spec);

// Numerically stable building blocks shared across the library.
double sigmoid(double x);
double log1pexp(double x);

}  // namespace exprbm
