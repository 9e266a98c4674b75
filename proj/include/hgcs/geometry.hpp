#pragma once

#include "hgcs/states.hpp"

namespace hgcs {

/// Coefficient of dz̄ dz in the Fubini-Study metric of the p=1, q=0 even or
/// odd family, equal to d⟨N⟩/dx.
struct MetricSample {
  double x = 0.0;
  double density = 0.0;
  bool weak_parameter = false;  // 0 < a <= 1: formula valid, measure context not
};

/// Throws ParameterError for a <= 0, ParityError for full states and
/// DomainError unless 0 <= x < 1.
MetricSample metric_density(Parity parity, double a, double x);

/// Central difference (f(x+h) - f(x-h)) / 2h of ⟨N⟩ for any parity family.
/// Requires 0 < h < x and x + h inside the convergence domain.
double fd_number_slope(const ParamSet& params, Parity parity, double x, double h);

struct FdCheck {
  double analytic = 0.0;
  double central = 0.0;
  double deviation = 0.0;            // |analytic - central| / |analytic|
  double richardson_estimate = 0.0;  // truncation error of `central` from steps h and h/2
  bool step_too_large = false;       // richardson_estimate / |analytic| > tol
};

/// Compares metric_density with the central difference of ⟨N⟩. Requires
/// 0 < h < x < 1 - h.
FdCheck fd_check_metric(Parity parity, double a, double x, double h, double tol = 1e-6);

}  // namespace hgcs
