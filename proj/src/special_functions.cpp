#include "hgcs/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hgcs/errors.hpp"
#include "series_accumulator.hpp"

namespace hgcs {
namespace {

constexpr long long kDirectPochhammerLimit = 2048;

bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

double step_ratio(std::span<const double> a, std::span<const double> b, double x, double m) {
  double r = x / (m + 1.0);
  for (double v : a) r *= v + m;
  for (double v : b) r /= v + m;
  return r;
}

SeriesResult sum_series(std::span<const double> a, std::span<const double> b, double x,
                        SeriesParity parity, double tol) {
  if (!(tol > 0.0)) throw ParameterError("series tolerance must be > 0");
  if (x == 0.0) return {parity == SeriesParity::odd ? 0.0 : 1.0, 0.0, 1};

  const bool ratio_tends_to_x = a.size() == b.size() + 1;
  const double ax = std::fabs(x);
  detail::SeriesAccumulator acc(tol);
  double term = 1.0;
  for (std::size_t n = 0; n < kSeriesTermCap; ++n) {
    const double m = static_cast<double>(n);
    const double r1 = step_ratio(a, b, x, m);
    const bool contributes = parity == SeriesParity::all ||
                             ((n % 2 == 0) == (parity == SeriesParity::even));
    if (contributes) {
      double bound = parity == SeriesParity::all ? std::fabs(r1)
                                                 : std::fabs(r1 * step_ratio(a, b, x, m + 1.0));
      if (ratio_tends_to_x) bound = std::max(bound, parity == SeriesParity::all ? ax : ax * ax);
      const bool done = acc.add(term, bound);
      if (!std::isfinite(acc.sum())) {
        std::ostringstream msg;
        msg << "series overflow at x = " << x;
        throw OverflowError(msg.str());
      }
      if (done) return {acc.sum(), acc.tail(), n + 1};
    }
    const double next = term * r1;
    // Terminating series (a numerator reached a nonpositive integer) or
    // terms below the smallest subnormal: everything after is zero.
    if (next == 0.0) return {acc.sum(), 0.0, n + 1};
    term = next;
  }
  std::ostringstream msg;
  msg << "series did not converge within " << kSeriesTermCap << " terms at x = " << x;
  throw ConvergenceError(msg.str(), std::fabs(term));
}

}  // namespace

double ln_pochhammer(double a, long long n) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    std::ostringstream msg;
    msg << "ln_pochhammer requires a > 0, got " << a;
    throw DomainError(msg.str());
  }
  if (n < 0) throw ParameterError("ln_pochhammer requires n >= 0");
  if (n == 0) return 0.0;
  if (n > kDirectPochhammerLimit) return std::lgamma(a + static_cast<double>(n)) - std::lgamma(a);
  double mantissa = 1.0;
  long long exponent = 0;
  for (long long k = 0; k < n; ++k) {
    int e = 0;
    mantissa = std::frexp(mantissa * (a + static_cast<double>(k)), &e);
    exponent += e;
  }
  return std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln2;
}

ConvergenceDomain convergence_domain(const ParamSet& params) {
  ConvergenceDomain d;
  for (double v : params.a()) d.eta += v;
  for (double v : params.b()) d.eta -= v;
  if (params.p() < params.q() + 1) {
    d.kind = DomainKind::entire;
  } else if (params.p() == params.q() + 1) {
    d.kind = DomainKind::unit_disc;
  } else {
    d.kind = DomainKind::divergent;
  }
  return d;
}

SeriesResult hyper_series(const ParamSet& params, double x, SeriesParity parity, double tol) {
  if (!std::isfinite(x)) throw DomainError("series argument must be finite");
  if (x != 0.0) {
    const auto domain = convergence_domain(params);
    if (domain.kind == DomainKind::divergent) {
      std::ostringstream msg;
      msg << params.p() << "F" << params.q() << " diverges for every x != 0";
      throw DomainError(msg.str());
    }
    if (domain.kind == DomainKind::unit_disc && !(std::fabs(x) < 1.0)) {
      std::ostringstream msg;
      msg << params.p() << "F" << params.q() << " requires |x| < 1, got x = " << x;
      throw DomainError(msg.str());
    }
  }
  return sum_series(params.a(), params.b(), x, parity, tol);
}

SeriesResult hyper_pfq(const ParamSet& params, double x, double tol) {
  return hyper_series(params, x, SeriesParity::all, tol);
}

SeriesResult hyper_even_pcq(const ParamSet& params, double x, double tol) {
  return hyper_series(params, x, SeriesParity::even, tol);
}

SeriesResult hyper_odd_psq(const ParamSet& params, double x, double tol) {
  return hyper_series(params, x, SeriesParity::odd, tol);
}

std::vector<double> hyper_terms(const ParamSet& params, double x, std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  double term = 1.0;
  for (std::size_t n = 0; n < count; ++n) {
    out.push_back(term);
    term *= step_ratio(params.a(), params.b(), x, static_cast<double>(n));
  }
  return out;
}

double hyper_term_direct(const ParamSet& params, double x, long long n) {
  if (n < 0) throw ParameterError("term index must be >= 0");
  if (n == 0) return 1.0;
  if (x == 0.0) return 0.0;
  double log_mag = static_cast<double>(n) * std::log(std::fabs(x)) - std::lgamma(static_cast<double>(n) + 1.0);
  for (double v : params.a()) log_mag += ln_pochhammer(v, n);
  for (double v : params.b()) log_mag -= ln_pochhammer(v, n);
  const double sign = (x < 0.0 && n % 2 == 1) ? -1.0 : 1.0;
  return sign * std::exp(log_mag);
}

SeriesResult generic_hypergeometric(std::span<const double> a, std::span<const double> b, double x,
                                    double tol) {
  for (double v : b) {
    if (is_nonpositive_integer(v)) {
      std::ostringstream msg;
      msg << "denominator parameter " << v << " is a nonpositive integer";
      throw DomainError(msg.str());
    }
  }
  if (x != 0.0) {
    bool terminates = false;
    for (double v : a) terminates = terminates || is_nonpositive_integer(v);
    if (!terminates && a.size() > b.size() + 1) throw DomainError("series diverges for x != 0");
    if (!terminates && a.size() == b.size() + 1 && !(std::fabs(x) < 1.0)) {
      throw DomainError("series requires |x| < 1");
    }
  }
  return sum_series(a, b, x, SeriesParity::all, tol);
}

double gauss_2f1(double a, double b, double c, double x) {
  const bool terminates = is_nonpositive_integer(a) || is_nonpositive_integer(b);
  if (!terminates && !(std::fabs(x) < 1.0)) {
    std::ostringstream msg;
    msg << "gauss_2f1 requires |x| < 1, got " << x;
    throw DomainError(msg.str());
  }
  if (is_nonpositive_integer(c)) {
    std::ostringstream msg;
    msg << "gauss_2f1 requires c not a nonpositive integer, got " << c;
    throw DomainError(msg.str());
  }
  constexpr double tol = 1e-15;
  if (x <= -0.5 && !terminates) {
    // Pfaff: 2F1(a,b;c;x) = (1-x)^{-a} 2F1(a, c-b; c; x/(x-1)), argument in [1/3, 1/2).
    const double y = x / (x - 1.0);
    const double num[] = {a, c - b};
    const double den[] = {c};
    return std::pow(1.0 - x, -a) * generic_hypergeometric(num, den, y, tol).value;
  }
  const double num[] = {a, b};
  const double den[] = {c};
  return generic_hypergeometric(num, den, x, tol).value;
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  return 1.0 / std::tgamma(x);
}

}  // namespace hgcs
