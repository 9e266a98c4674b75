#include <cmath>
#include <sstream>

#include "hgcs/errors.hpp"
#include "hgcs/quadrature.hpp"
#include "hgcs/special_functions.hpp"

namespace hgcs {
namespace {

// U(a,b,x) = x^{-a}/Γ(a) ∫_0^∞ e^{-s} s^{a-1} (1 + s/x)^{b-a-1} ds,  a > 0.
// For a < 1 the substitution s = v^{1/a} removes the endpoint singularity.
double hyperu_integral(double a, double b, double x) {
  const double c = b - a - 1.0;
  QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  opts.max_levels = 9;
  opts.throw_on_failure = false;
  QuadratureResult r;
  const double scale = std::max(1.0, a - 1.0);
  if (a < 1.0) {
    const double inv_a = 1.0 / a;
    r = integrate_half_line(
        [=](double v) {
          const double s = std::pow(v, inv_a);
          return std::exp(-s + c * std::log1p(s / x));
        },
        1.0, opts);
    r.value *= inv_a;
    r.error_estimate *= inv_a;
  } else {
    r = integrate_half_line(
        [=](double s) { return std::exp(-s + (a - 1.0) * std::log(s) + c * std::log1p(s / x)); },
        scale, opts);
  }
  if (!(r.error_estimate <= 1e-10 * std::fabs(r.value))) {
    throw ConvergenceError("hyperu integral did not reach tolerance", r.error_estimate);
  }
  return std::exp(-a * std::log(x) - std::lgamma(a)) * r.value;
}

}  // namespace

double hyperu(double a, double b, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << "hyperu requires x > 0, got " << x;
    throw DomainError(msg.str());
  }
  if (a == 0.0) return 1.0;
  // Kummer: U(a,b,x) = x^{1-b} U(a-b+1, 2-b, x). Take the representation
  // whose first parameter is larger (milder singularity at s = 0).
  const double a_alt = a - b + 1.0;
  if (a_alt == 0.0) return std::pow(x, 1.0 - b);
  if (a > 0.0 && a >= a_alt) return hyperu_integral(a, b, x);
  if (a_alt > 0.0) return std::pow(x, 1.0 - b) * hyperu_integral(a_alt, 2.0 - b, x);
  // Both first parameters are negative: start from a + m > 0 and step down with
  // U(a-1,b,x) = (2a - b + x) U(a,b,x) - a (a - b + 1) U(a+1,b,x).
  const int m = static_cast<int>(std::floor(-a)) + 1;
  if (m > 200) {
    std::ostringstream msg;
    msg << "hyperu(" << a << ", " << b << ", x): first parameter too negative";
    throw ParameterError(msg.str());
  }
  double upper = hyperu_integral(a + m + 1.0, b, x);
  double current = hyperu_integral(a + m, b, x);
  for (int k = m; k > 0; --k) {
    const double ak = a + k;
    const double lower = (2.0 * ak - b + x) * current - ak * (ak - b + 1.0) * upper;
    upper = current;
    current = lower;
  }
  return current;
}

double whittaker_w(double kappa, double mu, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << "whittaker_w requires x > 0, got " << x;
    throw DomainError(msg.str());
  }
  return std::exp(-x / 2.0 + (mu + 0.5) * std::log(x)) * hyperu(mu - kappa + 0.5, 1.0 + 2.0 * mu, x);
}

}  // namespace hgcs
