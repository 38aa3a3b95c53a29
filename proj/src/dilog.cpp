#include "exprbm/dilog.hpp"

#include <cmath>

#include "exprbm/errors.hpp"

namespace exprbm {
namespace {

constexpr double kPi2Over6 = 1.6449340668482264364724152;

// Power series, valid (and fast) for |x| <= 1/2.
double dilog_series(double x) {
  double term = x;
  double sum = x;
  for (int k = 2; k < 80; ++k) {
    term *= x;
    const double add = term / (static_cast<double>(k) * k);
    sum += add;
    if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

}  // namespace

double dilog(double x) {
  if (!(x <= 1.0)) throw DomainError("dilog: argument must be <= 1");
  if (x == 1.0) return kPi2Over6;
  if (x == 0.0) return 0.0;
  if (x < -1.0) {
    // Li2(x) = -pi^2/6 - ln^2(-x)/2 - Li2(1/x)
    const double l = std::log(-x);
    return -kPi2Over6 - 0.5 * l * l - dilog(1.0 / x);
  }
  if (x < -0.5) {
    // Li2(x) = -ln^2(1-x)/2 - Li2(x/(x-1)),  x/(x-1) in (1/3, 1/2]
    const double l = std::log1p(-x);
    return -0.5 * l * l - dilog_series(x / (x - 1.0));
  }
  if (x <= 0.5) return dilog_series(x);
  // Li2(x) = pi^2/6 - ln(x) ln(1-x) - Li2(1-x),  1-x in (0, 1/2)
  return kPi2Over6 - std::log(x) * std::log1p(-x) - dilog_series(1.0 - x);
}

}  // namespace exprbm
