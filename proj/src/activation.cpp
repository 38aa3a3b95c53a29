#include "exprbm/activation.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "exprbm/dilog.hpp"
#include "exprbm/errors.hpp"

namespace exprbm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi2Over6 = 1.6449340668482264364724152;

double xlogx(double t) { return t > 0.0 ? t * std::log(t) : 0.0; }

// --- sigmoid -----------------------------------------------------------

double sig_f(double e) { return sigmoid(e); }
double sig_fp(double e) {
  const double s = sigmoid(e);
  return s * (1.0 - s);
}
double sig_F(double e) { return log1pexp(e); }
double sig_Fs(double y) { return xlogx(y) + xlogx(1.0 - y); }
double sig_finv(double y) {
  if (y <= 0.0 || y >= 1.0) throw DomainError("sigmoid: f_inv needs y in (0,1)");
  return std::log(y) - std::log1p(-y);
}

// --- noisy tanh: f = sigmoid(eta) - 1/2 = tanh(eta/2)/2 ----------------

double nt_f(double e) { return 0.5 * std::tanh(0.5 * e); }
double nt_fp(double e) {
  const double s = sigmoid(e);
  return s * (1.0 - s);
}
double nt_F(double e) { return log1pexp(e) - 0.5 * e; }
double nt_Fs(double y) { return xlogx(0.5 + y) + xlogx(0.5 - y); }
double nt_finv(double y) {
  if (y <= -0.5 || y >= 0.5)
    throw DomainError("noisy-tanh: f_inv needs y in (-1/2,1/2)");
  return std::log(0.5 + y) - std::log(0.5 - y);
}

// --- arcsinh ------------------------------------------------------------

double as_f(double e) { return std::asinh(e); }
double as_fp(double e) { return 1.0 / std::sqrt(1.0 + e * e); }
double as_F(double e) { return e * std::asinh(e) - std::sqrt(1.0 + e * e) + 1.0; }
double as_Fs(double y) { return std::cosh(y) - 1.0; }
double as_finv(double y) { return std::sinh(y); }

// --- symmetric square root unit: f = sign(eta) sqrt(|eta|) --------------

double ssq_f(double e) { return std::copysign(std::sqrt(std::fabs(e)), e); }
double ssq_fp(double e) {
  const double a = std::fabs(e);
  return a > 0.0 ? 0.5 / std::sqrt(a) : kInf;
}
double ssq_F(double e) {
  const double a = std::fabs(e);
  return (2.0 / 3.0) * a * std::sqrt(a);
}
double ssq_Fs(double y) {
  const double a = std::fabs(y);
  return a * a * a / 3.0;
}
double ssq_finv(double y) { return y * std::fabs(y); }

// --- linear --------------------------------------------------------------

double lin_f(double e) { return e; }
double lin_fp(double) { return 1.0; }
double lin_F(double e) { return 0.5 * e * e; }
double lin_Fs(double y) { return 0.5 * y * y; }
double lin_finv(double y) { return y; }

// --- softplus -------------------------------------------------------------
// F(eta) = -Li2(-e^eta); computed through the inversion identity for eta > 0
// so the exponential never overflows. F*(y) = y^2/2 + Li2(e^-y) - pi^2/6;
// both constants make Fenchel equality exact (check the eta -> -inf limit).

double sp_f(double e) { return log1pexp(e); }
double sp_fp(double e) { return sigmoid(e); }
double sp_F(double e) {
  if (e <= 0.0) return -dilog(-std::exp(e));
  return kPi2Over6 + 0.5 * e * e + dilog(-std::exp(-e));
}
double sp_Fs(double y) {
  if (y < 0.0) throw DomainError("softplus: F_star needs y >= 0");
  if (y == 0.0) return 0.0;
  return 0.5 * y * y + dilog(std::exp(-y)) - kPi2Over6;
}
double sp_finv(double y) {
  if (y < 0.0) throw DomainError("softplus: f_inv needs y >= 0");
  if (y == 0.0) return -kInf;
  return std::log(std::expm1(y));
}
double sp_series_inv(double u) { return u; }

// --- relu ------------------------------------------------------------------
// The derivative follows ident(eta > 0): zero at the kink itself.

double rl_f(double e) { return e > 0.0 ? e : 0.0; }
double rl_fp(double e) { return e > 0.0 ? 1.0 : 0.0; }
double rl_F(double e) { return e > 0.0 ? 0.5 * e * e : 0.0; }
double rl_Fs(double y) {
  if (y < 0.0) throw DomainError("relu: F_star needs y >= 0");
  return 0.5 * y * y;
}
double rl_finv(double y) {
  if (y < 0.0) throw DomainError("relu: f_inv needs y >= 0");
  return y;
}

// --- requ: f = max(0, eta |eta|) -------------------------------------------

double rq_f(double e) { return e > 0.0 ? e * e : 0.0; }
double rq_fp(double e) { return e > 0.0 ? 2.0 * e : 0.0; }
double rq_F(double e) { return e > 0.0 ? e * e * e / 3.0 : 0.0; }
double rq_Fs(double y) {
  if (y < 0.0) throw DomainError("requ: F_star needs y >= 0");
  return (2.0 / 3.0) * y * std::sqrt(y);
}
double rq_finv(double y) {
  if (y < 0.0) throw DomainError("requ: f_inv needs y >= 0");
  return std::sqrt(y);
}

// --- symmetric quadratic unit: f = eta |eta| --------------------------------

double sq_f(double e) { return e * std::fabs(e); }
double sq_fp(double e) { return 2.0 * std::fabs(e); }
double sq_F(double e) {
  const double a = std::fabs(e);
  return a * a * a / 3.0;
}
double sq_Fs(double y) {
  const double a = std::fabs(y);
  return (2.0 / 3.0) * a * std::sqrt(a);
}
double sq_finv(double y) { return std::copysign(std::sqrt(std::fabs(y)), y); }

// --- exponential / poisson ---------------------------------------------------

double ex_f(double e) { return std::exp(e); }
double ex_fp(double e) { return std::exp(e); }
double ex_F(double e) { return std::exp(e); }
double ex_Fs(double y) {
  if (y < 0.0) throw DomainError("exp: F_star needs y >= 0");
  return xlogx(y) - y;
}
double ex_finv(double y) {
  if (y < 0.0) throw DomainError("exp: f_inv needs y >= 0");
  return y > 0.0 ? std::log(y) : -kInf;
}

// --- sinh ---------------------------------------------------------------------

double sh_f(double e) { return std::sinh(e); }
double sh_fp(double e) { return std::cosh(e); }
double sh_F(double e) { return std::cosh(e); }
double sh_Fs(double y) { return y * std::asinh(y) - std::sqrt(1.0 + y * y); }
double sh_finv(double y) { return std::asinh(y); }

constexpr std::array<ActivationSpec, 12> kCatalog{{
    {"sigmoid", Support::Binary01, ExactSampler::Bernoulli, sig_f, sig_fp,
     sig_F, sig_Fs, sig_finv, nullptr, false, 0.0, 1.0, -10.0, 10.0, false},
    {"noisy-tanh", Support::BinaryPM, ExactSampler::Bernoulli, nt_f, nt_fp,
     nt_F, nt_Fs, nt_finv, nullptr, true, -0.5, 0.5, -10.0, 10.0, false},
    {"arcsinh", Support::ContinuousReal, ExactSampler::None, as_f, as_fp, as_F,
     as_Fs, as_finv, nullptr, true, -kInf, kInf, -8.0, 8.0, false},
    {"symsqu", Support::ContinuousReal, ExactSampler::None, ssq_f, ssq_fp,
     ssq_F, ssq_Fs, ssq_finv, nullptr, true, -kInf, kInf, -8.0, 8.0, true},
    {"linear", Support::ContinuousReal, ExactSampler::Gaussian, lin_f, lin_fp,
     lin_F, lin_Fs, lin_finv, nullptr, true, -kInf, kInf, -20.0, 20.0, false},
    {"softplus", Support::ContinuousNonneg, ExactSampler::None, sp_f, sp_fp,
     sp_F, sp_Fs, sp_finv, sp_series_inv, false, 0.0, kInf, -30.0, 30.0,
     false},
    {"relu", Support::ContinuousNonneg, ExactSampler::None, rl_f, rl_fp, rl_F,
     rl_Fs, rl_finv, nullptr, false, 0.0, kInf, 0.05, 20.0, true},
    {"requ", Support::ContinuousNonneg, ExactSampler::None, rq_f, rq_fp, rq_F,
     rq_Fs, rq_finv, nullptr, false, 0.0, kInf, 0.05, 8.0, true},
    {"symqu", Support::ContinuousReal, ExactSampler::None, sq_f, sq_fp, sq_F,
     sq_Fs, sq_finv, nullptr, true, -kInf, kInf, -8.0, 8.0, true},
    {"exp", Support::ContinuousNonneg, ExactSampler::None, ex_f, ex_fp, ex_F,
     ex_Fs, ex_finv, nullptr, false, 0.0, kInf, -20.0, 20.0, false},
    {"sinh", Support::ContinuousReal, ExactSampler::None, sh_f, sh_fp, sh_F,
     sh_Fs, sh_finv, nullptr, true, -kInf, kInf, -8.0, 8.0, false},
    {"poisson", Support::NonnegInteger, ExactSampler::Poisson, ex_f, ex_fp,
     ex_F, ex_Fs, ex_finv, nullptr, false, 0.0, kInf, -20.0, 20.0, false},
}};

}  // namespace

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log1pexp(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

std::span<const ActivationSpec> catalog() { return kCatalog; }

const ActivationSpec& unit_by_name(std::string_view name) {
  for (const auto& spec : kCatalog)
    if (spec.name == name) return spec;
  throw DomainError("unknown unit: " + std::string(name));
}

bool in_support_closure(Support s, double y) {
  if (std::isnan(y)) return false;
  switch (s) {
    case Support::ContinuousReal:
      return std::isfinite(y);
    case Support::ContinuousNonneg:
    case Support::NonnegInteger:
      return y >= 0.0 && std::isfinite(y);
    case Support::Binary01:
      return y >= 0.0 && y <= 1.0;
    case Support::BinaryPM:
      return y >= -0.5 && y <= 0.5;
  }
  return false;
}

double support_lo(Support s) {
  switch (s) {
    case Support::ContinuousReal:
      return -std::numeric_limits<double>::infinity();
    case Support::ContinuousNonneg:
    case Support::NonnegInteger:
    case Support::Binary01:
      return 0.0;
    case Support::BinaryPM:
      return -0.5;
  }
  return 0.0;
}

double support_hi(Support s) {
  switch (s) {
    case Support::Binary01:
      return 1.0;
    case Support::BinaryPM:
      return 0.5;
    default:
      return std::numeric_limits<double>::infinity();
  }
}

bool support_is_continuous(Support s) {
  return s == Support::ContinuousReal || s == Support::ContinuousNonneg;
}

double bregman_divergence(double eta, double y, const ActivationSpec& spec) {
  if (!std::isfinite(eta)) throw DomainError("bregman_divergence: eta not finite");
  if (!in_support_closure(spec.support, y))
    throw DomainError("bregman_divergence: y outside support of " +
                      std::string(spec.name));
  const double d = -eta * y + spec.F(eta) + spec.F_star(y);
  if (!std::isfinite(d))
    throw OverflowError("bregman_divergence: non-finite value for " +
                        std::string(spec.name));
  return d;
}

double conditional_log_density_unnormalized(double eta, double y,
                                            const ActivationSpec& spec) {
  return -bregman_divergence(eta, y, spec);
}

double matching_loss(double eta, double y_target, const ActivationSpec& spec) {
  return bregman_divergence(eta, y_target, spec);
}

}  // namespace exprbm
