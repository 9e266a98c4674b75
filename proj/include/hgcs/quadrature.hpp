#pragma once

#include <cstddef>
#include <functional>

namespace hgcs {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  int levels = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_levels = 10;  // step h = 2^-level; level 10 is ~2^14 nodes per rule
  bool throw_on_failure = true;
};

/// Integrand on [0, 1] receiving both x and 1 - x, so endpoint singularities
/// of the form (1-x)^s can be evaluated without cancellation.
using FiniteIntegrand = std::function<double(double x, double one_minus_x)>;
using Integrand = std::function<double(double x)>;

/// Tanh-sinh rule on [0, 1]. Algebraic endpoint singularities are absorbed
/// by the double-exponential decay of the node weights.
QuadratureResult integrate_unit_interval(const FiniteIntegrand& f,
                                         const QuadratureOptions& opts = {});

/// ∫_lo^hi f via the unit-interval rule.
QuadratureResult integrate_interval(const Integrand& f, double lo, double hi,
                                    const QuadratureOptions& opts = {});

/// Exp-sinh rule on [0, ∞) with x = scale * exp(π/2 sinh t). `scale` should
/// sit near the bulk of the integrand.
QuadratureResult integrate_half_line(const Integrand& f, double scale = 1.0,
                                     const QuadratureOptions& opts = {});

}  // namespace hgcs
