#include "hgcs/moments.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hgcs/errors.hpp"
#include "hgcs/quadrature.hpp"
#include "hgcs/special_functions.hpp"
#include "hgcs/states.hpp"

namespace hgcs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void singular_endpoint(WeightTag tag, double x) {
  std::ostringstream msg;
  msg << to_string(tag) << " weight is singular or undefined at x = " << x;
  throw DomainError(msg.str());
}

// Γ(a1)Γ(a2)/Γ(b) (1-x)^{c-1} 2F1(a1-b, a2-b; c; 1-x) with c = a1 + a2 - b - 1.
// The series in 1-x is used for 1-x <= 1/2; closer to x = 0 the argument is
// moved to x by the 1-z connection formula.
double gauss_weight(double a1, double a2, double b, double x, double xc) {
  const double c = a1 + a2 - b - 1.0;
  const double lead = std::exp(std::lgamma(a1) + std::lgamma(a2) - std::lgamma(b)) * std::pow(xc, c - 1.0);
  const auto terminating = [](double v) { return v <= 0.0 && v == std::round(v); };
  if (xc <= 0.5 || terminating(a1 - b) || terminating(a2 - b)) {
    return lead * rgamma(c) * gauss_2f1(a1 - b, a2 - b, c, xc);
  }
  const double near = std::tgamma(b - 1.0) * rgamma(a1 - 1.0) * rgamma(a2 - 1.0) * gauss_2f1(a1 - b, a2 - b, 2.0 - b, x);
  const double far = std::tgamma(1.0 - b) * rgamma(a1 - b) * rgamma(a2 - b) * std::pow(x, b - 1.0) *
                     gauss_2f1(a2 - 1.0, a1 - 1.0, b, x);
  return lead * (near + far);
}

double weight_split(const WeightCase& c, double x, double xc) {
  const auto& a = c.params.a();
  const auto& b = c.params.b();
  switch (c.tag) {
    case WeightTag::exp_00:
      return std::exp(-x);
    case WeightTag::besselk_01: {
      if (x == 0.0) {
        if (b[0] > 1.0) return 1.0 / (b[0] - 1.0);
        singular_endpoint(c.tag, x);
      }
      double k = 0.0;
      try {
        k = bessel_k(b[0] - 1.0, 2.0 * std::sqrt(x));
      } catch (const OverflowError&) {
        // Only reachable for b - 1 >= 1 at tiny x, where x^{(b-1)/2} K_{b-1}(2 sqrt x)
        // equals its limit Γ(b-1)/2 to within O(x).
        return 1.0 / (b[0] - 1.0);
      }
      if (k == 0.0) return 0.0;
      return 2.0 * std::exp(0.5 * (b[0] - 1.0) * std::log(x) - std::lgamma(b[0])) * k;
    }
    case WeightTag::beta_10: {
      const double s = a[0] - 2.0;
      if (xc == 0.0 && s < 0.0) singular_endpoint(c.tag, x);
      return (a[0] - 1.0) * std::pow(xc, s);
    }
    case WeightTag::whittaker_11: {
      if (x == 0.0) singular_endpoint(c.tag, x);
      const double w = whittaker_w(0.5 * b[0] + 1.0 - a[0], 0.5 * (b[0] - 1.0), x);
      if (w == 0.0) return 0.0;
      return std::exp(std::lgamma(a[0]) - std::lgamma(b[0]) - 0.5 * x + (0.5 * b[0] - 1.0) * std::log(x)) * w;
    }
    case WeightTag::gauss2f1_21: {
      if (x == 0.0 || xc == 0.0) singular_endpoint(c.tag, x);
      const double bb = b[0];
      const bool terminating = (a[0] - bb <= 0.0 && a[0] - bb == std::round(a[0] - bb)) ||
                               (a[1] - bb <= 0.0 && a[1] - bb == std::round(a[1] - bb));
      if (xc > 0.5 && !terminating && std::fabs(bb - std::round(bb)) < 1e-3) {
        // Both connection terms have poles at integer b while their sum is
        // smooth in b: symmetric averages at h and 2h, Richardson-combined.
        constexpr double h = 1e-3;
        const auto avg = [&](double d) {
          return 0.5 * (gauss_weight(a[0], a[1], bb - d, x, xc) + gauss_weight(a[0], a[1], bb + d, x, xc));
        };
        return (4.0 * avg(h) - avg(2.0 * h)) / 3.0;
      }
      return gauss_weight(a[0], a[1], bb, x, xc);
    }
  }
  return 0.0;
}

}  // namespace

const char* to_string(WeightTag tag) {
  switch (tag) {
    case WeightTag::exp_00: return "exp_00";
    case WeightTag::besselk_01: return "besselK_01";
    case WeightTag::beta_10: return "beta_10";
    case WeightTag::whittaker_11: return "whittaker_11";
    case WeightTag::gauss2f1_21: return "gauss2F1_21";
  }
  return "?";
}

const char* to_string(MomentFilter filter) {
  switch (filter) {
    case MomentFilter::all: return "all";
    case MomentFilter::even: return "even";
    case MomentFilter::odd: return "odd";
  }
  return "?";
}

MomentFilter parse_moment_filter(const std::string& text) {
  if (text == "all" || text == "full") return MomentFilter::all;
  if (text == "even") return MomentFilter::even;
  if (text == "odd") return MomentFilter::odd;
  throw ParameterError("unknown moment filter '" + text + "' (expected all, even or odd)");
}

WeightCase weight_case(const ParamSet& params) {
  const auto p = params.p();
  const auto q = params.q();
  if (p == 0 && q == 0) return {WeightTag::exp_00, params, kInf};
  if (p == 0 && q == 1) return {WeightTag::besselk_01, params, kInf};
  if (p == 1 && q == 0) {
    if (!(params.a()[0] > 1.0)) {
      throw ParameterError("beta_10 weight (a-1)(1-x)^(a-2) needs a > 1 to be a finite measure");
    }
    return {WeightTag::beta_10, params, 1.0};
  }
  if (p == 1 && q == 1) return {WeightTag::whittaker_11, params, kInf};
  if (p == 2 && q == 1) {
    if (!(params.a()[0] + params.a()[1] - params.b()[0] > 1.0)) {
      throw ParameterError("gauss2F1_21 weight needs a1 + a2 - b > 1");
    }
    return {WeightTag::gauss2f1_21, params, 1.0};
  }
  std::ostringstream msg;
  msg << "no closed-form weight for (p,q) = (" << p << "," << q
      << "); the general Meijer-G weight is not implemented";
  throw UnsupportedCaseError(msg.str());
}

double weight_eval(const WeightCase& c, double x) {
  if (!(x >= 0.0 && x <= c.support_upper) || std::isinf(x)) {
    std::ostringstream msg;
    msg << to_string(c.tag) << " weight evaluated outside its support at x = " << x;
    throw DomainError(msg.str());
  }
  return weight_split(c, x, c.support_upper == 1.0 ? 1.0 - x : kInf);
}

double quadrature_moment(const WeightCase& c, int n, double tol) {
  if (n < 0) throw ParameterError("moment order must be >= 0");
  QuadratureOptions opts;
  opts.rel_tol = tol;
  opts.max_levels = 12;
  switch (c.tag) {
    case WeightTag::beta_10:
    case WeightTag::gauss2f1_21:
      return integrate_unit_interval(
                 [&](double x, double xc) {
                   if (x <= 0.0 || xc <= 0.0) return 0.0;
                   return std::pow(x, n) * weight_split(c, x, xc);
                 },
                 opts)
          .value;
    case WeightTag::besselk_01:
      // x = t^2 keeps the K-induced singularity at the origin algebraic in t.
      return integrate_half_line(
                 [&](double t) {
                   if (t * t == 0.0) return 0.0;
                   const double w = weight_split(c, t * t, kInf);
                   return w == 0.0 ? 0.0 : 2.0 * std::pow(t, 2 * n + 1) * w;
                 },
                 std::sqrt(std::max(1.0, static_cast<double>(n))), opts)
          .value;
    case WeightTag::exp_00:
    case WeightTag::whittaker_11:
      return integrate_half_line(
                 [&](double x) {
                   if (x <= 0.0) return 0.0;
                   const double w = weight_split(c, x, kInf);
                   return w == 0.0 ? 0.0 : std::pow(x, n) * w;
                 },
                 std::max(1.0, static_cast<double>(n)), opts)
          .value;
  }
  return 0.0;
}

MomentReport verify_moments(const WeightCase& c, int n_max, double tol, MomentFilter filter) {
  if (n_max < 0) throw ParameterError("n_max must be >= 0");
  MomentReport report{c.tag, filter, {}, 0.0};
  for (int n = 0; n <= n_max; ++n) {
    MomentEntry e;
    e.n = n;
    e.order = filter == MomentFilter::all ? n : (filter == MomentFilter::even ? 2 * n : 2 * n + 1);
    e.target = rho(c.params, e.order);
    e.value = quadrature_moment(c, e.order, tol);
    e.rel_error = std::fabs(e.value - e.target) / std::fabs(e.target);
    report.max_rel_error = std::max(report.max_rel_error, e.rel_error);
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace hgcs
