#include <algorithm>
#include <cmath>
#include <sstream>

#include "hgcs/errors.hpp"
#include "hgcs/quadrature.hpp"
#include "hgcs/special_functions.hpp"

namespace hgcs {

// K_nu(x) = ∫_0^∞ exp(-x cosh t) cosh(nu t) dt. The integrand is even and
// entire in t, so the trapezoidal rule converges geometrically; the step is
// halved until two successive sums agree.
double bessel_k(double nu, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << "bessel_k requires x > 0, got " << x;
    throw DomainError(msg.str());
  }
  nu = std::fabs(nu);
  // cosh t - 1 >= t^2/2 gives K_nu(x) <= e^{-x + nu^2/(2x)} sqrt(2 pi / x),
  // below the smallest subnormal once x > 1600 and x > nu^2.
  if (x > 1600.0 && x > nu * nu) return 0.0;
  // log of the integrand with e^{-x} factored out
  auto log_f = [nu, x](double t) {
    const double c = -x * 2.0 * std::sinh(t / 2.0) * std::sinh(t / 2.0);  // -x (cosh t - 1)
    return c + nu * t + std::log1p(std::exp(-2.0 * nu * t)) - std::log(2.0);
  };
  // Sum on the grid, starting from the mode so the magnitude reference is the peak.
  const double t_peak = nu > 0.0 ? std::asinh(nu / x) : 0.0;
  const double log_peak = log_f(t_peak);
  auto trapezoid = [&](double h) {
    double sum = 0.5 * std::exp(log_f(0.0) - log_peak);
    for (int k = 1;; ++k) {
      const double t = k * h;
      const double r = std::exp(log_f(t) - log_peak);
      sum += r;
      if (t > t_peak && r < 1e-18 * sum) break;
      if (k > 200000) throw ConvergenceError("bessel_k trapezoid did not terminate", r);
    }
    return sum * h;
  };
  // Peak width in t is about (x cosh t_peak)^{-1/2} = (x^2 + nu^2)^{-1/4}.
  double h = 0.5 * std::min(1.0, 1.0 / std::sqrt(std::hypot(x, nu)));
  double previous = trapezoid(h);
  for (int level = 0; level < 12; ++level) {
    h /= 2.0;
    const double current = trapezoid(h);
    if (std::fabs(current - previous) <= 1e-14 * std::fabs(current)) {
      const double value = current * std::exp(log_peak - x);
      if (std::isinf(value)) {
        std::ostringstream msg;
        msg << "bessel_k(" << nu << ", " << x << ") overflows";
        throw OverflowError(msg.str());
      }
      return value;
    }
    previous = current;
  }
  throw ConvergenceError("bessel_k did not converge", std::fabs(previous));
}

}  // namespace hgcs
