#pragma once

#include <string>
#include <vector>

#include "hgcs/params.hpp"

namespace hgcs {

enum class WeightTag { exp_00, besselk_01, beta_10, whittaker_11, gauss2f1_21 };

/// Spelling used in reports: exp_00, besselK_01, beta_10, whittaker_11, gauss2F1_21.
const char* to_string(WeightTag tag);

/// Closed-form weight ω solving ∫_0^R x^n ω(x) dx = ρ(n) for one of the five
/// tabulated (p,q) shapes.
struct WeightCase {
  WeightTag tag;
  ParamSet params;
  double support_upper;  // 1 for p = q + 1, infinity otherwise
};

/// Throws UnsupportedCaseError for shapes outside (0,0), (0,1), (1,0), (1,1),
/// (2,1), and ParameterError when the weight is not a finite positive
/// measure (a <= 1 for (1,0), a1 + a2 - b <= 1 for (2,1)).
WeightCase weight_case(const ParamSet& params);

/// ω(x) for x in the support. Throws DomainError outside [0, R] or at an
/// endpoint where the closed form is singular.
double weight_eval(const WeightCase& c, double x);

inline constexpr double kDefaultQuadratureTol = 1e-10;

/// ∫_0^R x^n ω(x) dx by double-exponential quadrature. Throws
/// ConvergenceError with the achieved error if tol is not reached.
double quadrature_moment(const WeightCase& c, int n, double tol = kDefaultQuadratureTol);

enum class MomentFilter { all, even, odd };

const char* to_string(MomentFilter filter);
MomentFilter parse_moment_filter(const std::string& text);

struct MomentEntry {
  int n = 0;      // index in the filtered set
  int order = 0;  // moment order: n, 2n or 2n+1
  double target = 0.0;
  double value = 0.0;
  double rel_error = 0.0;
};

struct MomentReport {
  WeightTag tag;
  MomentFilter filter;
  std::vector<MomentEntry> entries;
  double max_rel_error = 0.0;
};

/// Compares quadrature moments against ρ(order) for n = 0..n_max, where the
/// order is n, 2n or 2n+1 according to the filter. `tol` is the quadrature
/// tolerance; pass/fail against a threshold is left to the caller.
MomentReport verify_moments(const WeightCase& c, int n_max, double tol = kDefaultQuadratureTol,
                            MomentFilter filter = MomentFilter::all);

}  // namespace hgcs
