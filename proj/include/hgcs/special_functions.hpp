#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hgcs/params.hpp"

namespace hgcs {

inline constexpr double kDefaultSeriesTol = 1e-12;
inline constexpr double kDefaultSpecialTol = 1e-10;
inline constexpr std::size_t kSeriesTermCap = 10'000;

/// Outcome of a truncated series. `abs_error_estimate` estimates the
/// discarded tail; the stopping rule keeps it below tol * max(1, |value|).
struct SeriesResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t terms_used = 1;
};

enum class DomainKind { entire, unit_disc, unit_circle_conditional, divergent };

struct ConvergenceDomain {
  DomainKind kind = DomainKind::entire;
  double eta = 0.0;  // sum(a) - sum(b)
};

/// Which Taylor coefficients of pFq are summed.
enum class SeriesParity { all, even, odd };

/// ln (a)_n for a > 0. Small n uses an exponent-tracked product, large n
/// falls back to lgamma differences.
double ln_pochhammer(double a, long long n);

ConvergenceDomain convergence_domain(const ParamSet& params);

/// pFq(a; b; x) and its even/odd parts. The term recurrence is
/// t_{n+1} = t_n * x * Π(a_i+n) / (Π(b_j+n) (n+1)); summation stops once three
/// consecutive contributing terms fall below tol * max(1, |sum|) and the
/// ratio-based tail estimate agrees. For p = q+1 the argument must satisfy
/// |x| < 1 (the boundary circle is refused).
SeriesResult hyper_pfq(const ParamSet& params, double x, double tol = kDefaultSeriesTol);
SeriesResult hyper_even_pcq(const ParamSet& params, double x, double tol = kDefaultSeriesTol);
SeriesResult hyper_odd_psq(const ParamSet& params, double x, double tol = kDefaultSeriesTol);
SeriesResult hyper_series(const ParamSet& params, double x, SeriesParity parity,
                          double tol = kDefaultSeriesTol);

/// Terms 0..count-1 of the pFq series built by the ratio recurrence.
std::vector<double> hyper_terms(const ParamSet& params, double x, std::size_t count);

/// n-th Taylor coefficient times x^n, from the log-domain closed form
/// exp(Σ ln(a_i)_n - Σ ln(b_j)_n - ln n! + n ln|x|) with the sign of x^n.
double hyper_term_direct(const ParamSet& params, double x, long long n);

/// Series with arbitrary real parameters (negative and terminating cases
/// allowed). Used by gauss_2f1 and the weight functions.
SeriesResult generic_hypergeometric(std::span<const double> a, std::span<const double> b, double x,
                                    double tol = kDefaultSeriesTol);

/// Modified Bessel function of the second kind, K_nu(x), x > 0.
double bessel_k(double nu, double x);

/// Tricomi confluent hypergeometric U(a, b, x), x > 0.
double hyperu(double a, double b, double x);

/// Whittaker W_{kappa,mu}(x), x > 0.
double whittaker_w(double kappa, double mu, double x);

/// Gauss 2F1(a, b; c; x) for |x| < 1, or any finite x when a or b is a
/// nonpositive integer (polynomial case).
double gauss_2f1(double a, double b, double c, double x);

/// 1/Γ(x), zero at the poles of Γ.
double rgamma(double x);

}  // namespace hgcs
