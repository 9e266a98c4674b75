#include "hgcs/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hgcs/errors.hpp"

namespace hgcs {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kInitialStep = 0.5;
constexpr double kMaxAbscissa = 6.7;
// A direction of the sweep stops after this many consecutive negligible terms.
constexpr int kNegligibleRun = 4;

// One trapezoidal level over the mapped variable t. `node(t, term)` writes
// weight * f(x(t)) and returns false where the map degenerates.
template <class Node>
double sweep(double h, bool odd_only, double reference, std::size_t& evals, Node&& node) {
  double total = 0.0;
  const int stride = odd_only ? 2 : 1;
  const int first = odd_only ? 1 : 0;
  for (int dir : {+1, -1}) {
    int negligible = 0;
    for (int k = (dir > 0 ? first : std::max(first, 1)); k * h <= kMaxAbscissa; k += stride) {
      const double t = dir * k * h;
      double term = 0.0;
      if (!node(t, term)) continue;
      ++evals;
      total += term;
      const double scale = std::fabs(reference) + std::fabs(total);
      negligible = std::fabs(term) <= 1e-18 * scale ? negligible + 1 : 0;
      if (negligible >= kNegligibleRun && k * h > 1.0) break;
    }
  }
  return total * h;
}

template <class Node>
QuadratureResult run_levels(const QuadratureOptions& opts, Node&& node, const char* rule) {
  QuadratureResult res;
  double h = kInitialStep;
  double estimate = sweep(h, false, 0.0, res.evaluations, node);
  double previous = estimate;
  for (int level = 1; level <= opts.max_levels; ++level) {
    h /= 2.0;
    const double extra = sweep(h, true, std::fabs(estimate) / h, res.evaluations, node);
    estimate = estimate / 2.0 + extra;
    res.levels = level;
    const double diff = std::fabs(estimate - previous);
    res.value = estimate;
    res.error_estimate = diff;
    if (!std::isfinite(estimate)) break;
    if (level >= 3 && diff <= std::max(opts.rel_tol * std::fabs(estimate), opts.abs_tol)) return res;
    previous = estimate;
  }
  if (opts.throw_on_failure) {
    std::ostringstream msg;
    msg << rule << " quadrature did not converge: value " << res.value << ", error estimate "
        << res.error_estimate;
    throw ConvergenceError(msg.str(), res.error_estimate);
  }
  return res;
}

}  // namespace

QuadratureResult integrate_unit_interval(const FiniteIntegrand& f, const QuadratureOptions& opts) {
  auto node = [&f](double t, double& term) {
    const double u = std::numbers::pi * std::sinh(t);
    const double x = 1.0 / (1.0 + std::exp(-u));
    const double xc = 1.0 / (1.0 + std::exp(u));
    if (x == 0.0 || xc == 0.0) return false;
    const double w = std::numbers::pi * std::cosh(t) * x * xc;
    if (w == 0.0) return false;
    term = w * f(x, xc);
    return true;
  };
  return run_levels(opts, node, "tanh-sinh");
}

QuadratureResult integrate_interval(const Integrand& f, double lo, double hi, const QuadratureOptions& opts) {
  const double width = hi - lo;
  auto mapped = [&](double x, double xc) {
    // Evaluate from the nearer endpoint to keep the abscissa accurate.
    return x <= 0.5 ? f(lo + width * x) : f(hi - width * xc);
  };
  auto res = integrate_unit_interval(mapped, opts);
  res.value *= width;
  res.error_estimate *= std::fabs(width);
  return res;
}

QuadratureResult integrate_half_line(const Integrand& f, double scale, const QuadratureOptions& opts) {
  if (!(scale > 0.0)) throw ParameterError("half-line quadrature scale must be > 0");
  auto node = [&f, scale](double t, double& term) {
    const double x = scale * std::exp(kHalfPi * std::sinh(t));
    if (x == 0.0 || !std::isfinite(x)) return false;
    const double w = kHalfPi * std::cosh(t) * x;
    term = w * f(x);
    return true;
  };
  return run_levels(opts, node, "exp-sinh");
}

}  // namespace hgcs
