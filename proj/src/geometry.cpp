#include "hgcs/geometry.hpp"

#include <cmath>
#include <sstream>

#include "hgcs/errors.hpp"
#include "hgcs/statistics.hpp"
#include "series_accumulator.hpp"

namespace hgcs {
namespace {

constexpr double kTol = 1e-15;

double even_part(double a, double x) { return hyper_even_pcq(ParamSet({a}, {}), x, kTol).value; }
double odd_part(double a, double x) { return hyper_odd_psq(ParamSet({a}, {}), x, kTol).value; }

// σ(x) = 1S0(a; x) / x = Σ_k (a)_{2k+1} / (2k+1)! x^{2k}.
double odd_part_over_x(double a, double x) {
  if (x == 0.0) return a;
  return odd_part(a, x) / x;
}

// σ'(x) = Σ_{k>=1} 2k (a)_{2k+1} / (2k+1)! x^{2k-1}, summed term by term so
// nothing cancels at small x.
double odd_part_over_x_slope(double a, double x) {
  if (x == 0.0) return 0.0;
  double coeff = a * (a + 1.0) * (a + 2.0) / 6.0;  // (a)_3 / 3!
  double power = x;
  detail::SeriesAccumulator acc(kTol);
  for (std::size_t k = 1; k < kSeriesTermCap; ++k) {
    const double kk = static_cast<double>(k);
    const double term = 2.0 * kk * coeff * power;
    const double n = 2.0 * kk + 1.0;
    const double next = (a + n) * (a + n + 1.0) / ((n + 1.0) * (n + 2.0)) * x * x * (kk + 1.0) / kk;
    if (acc.add(term, std::max(next, x * x))) return acc.sum();
    coeff *= (a + n) * (a + n + 1.0) / ((n + 1.0) * (n + 2.0));
    power *= x * x;
  }
  throw ConvergenceError("odd-part slope series did not converge", acc.tail());
}

}  // namespace

MetricSample metric_density(Parity parity, double a, double x) {
  if (!(std::isfinite(a) && a > 0.0)) throw ParameterError("metric density requires a > 0");
  if (parity == Parity::full) throw ParityError("metric density is defined for even and odd states only");
  if (!(x >= 0.0 && x < 1.0)) {
    std::ostringstream msg;
    msg << "metric density requires 0 <= x < 1, got " << x;
    throw DomainError(msg.str());
  }
  MetricSample out;
  out.x = x;
  out.weak_parameter = a <= 1.0;
  if (x == 0.0) return out;
  if (parity == Parity::even) {
    // ⟨N⟩_e = a x S(a+1)/C(a); C' = a S(a+1), S(a+1)' = (a+1) C(a+2).
    const double c0 = even_part(a, x);
    const double s1 = odd_part(a + 1.0, x);
    const double c2 = even_part(a + 2.0, x);
    out.density = a * s1 / c0 + a * (a + 1.0) * x * c2 / c0 - a * a * x * s1 * s1 / (c0 * c0);
  } else {
    // ⟨N⟩_o = a C(a+1)/σ with σ = S(a)/x; C(a+1)' = (a+1) S(a+2).
    const double sigma = odd_part_over_x(a, x);
    const double c1 = even_part(a + 1.0, x);
    const double s2 = odd_part(a + 2.0, x);
    out.density = a * (a + 1.0) * s2 / sigma - a * c1 * odd_part_over_x_slope(a, x) / (sigma * sigma);
  }
  return out;
}

double fd_number_slope(const ParamSet& params, Parity parity, double x, double h) {
  if (!(h > 0.0 && h < x)) throw ParameterError("finite-difference step must satisfy 0 < h < x");
  const double up = expect_n(StateSpec::from_x(params, parity, x + h));
  const double down = expect_n(StateSpec::from_x(params, parity, x - h));
  return (up - down) / (2.0 * h);
}

FdCheck fd_check_metric(Parity parity, double a, double x, double h, double tol) {
  if (!(h > 0.0 && h < x && x < 1.0 - h)) throw ParameterError("finite-difference check requires 0 < h < x < 1 - h");
  const ParamSet params({a}, {});
  FdCheck out;
  out.analytic = metric_density(parity, a, x).density;
  out.central = fd_number_slope(params, parity, x, h);
  const double half = fd_number_slope(params, parity, x, 0.5 * h);
  // D(h) - D(h/2) = (3/4) c h^2 for a second-order scheme.
  out.richardson_estimate = std::fabs(out.central - half) * 4.0 / 3.0;
  out.deviation = std::fabs(out.analytic - out.central) / std::fabs(out.analytic);
  out.step_too_large = out.richardson_estimate > tol * std::fabs(out.analytic);
  return out;
}

}  // namespace hgcs
