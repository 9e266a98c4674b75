#include "hgcs/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hgcs/errors.hpp"
#include "series_accumulator.hpp"

namespace hgcs {
namespace {

// Moment formulas divide series that nearly cancel at large x, so they are
// summed close to machine precision.
constexpr double kMomentTol = 1e-15;

void require_parity_state(const StateSpec& state, const char* what) {
  if (state.parity() == Parity::full) {
    throw ParityError(std::string(what) + " is defined here for even and odd states only");
  }
}

double head(const ParamSet& params, double x, SeriesParity parity) {
  return hyper_series(params, x, parity, kMomentTol).value;
}

// Π(a_i + k) / Π(b_j + k)
double shifted_ratio(const ParamSet& params, double k) {
  double v = 1.0;
  for (double a : params.a()) v *= a + k;
  for (double b : params.b()) v /= b + k;
  return v;
}

struct ShiftedSeries {
  double c0, s0, c1, s1, c2, s2;  // C and S at shifts 0, 1, 2
  double ratio1, ratio2;          // Πa/Πb and Π a(a+1) / Π b(b+1)
};

ShiftedSeries shifted_series(const ParamSet& params, double x, bool need_second) {
  ShiftedSeries out{};
  const ParamSet up1 = params.shifted(1.0);
  out.c0 = head(params, x, SeriesParity::even);
  out.s0 = head(params, x, SeriesParity::odd);
  out.c1 = head(up1, x, SeriesParity::even);
  out.s1 = head(up1, x, SeriesParity::odd);
  out.ratio1 = shifted_ratio(params, 0.0);
  if (need_second) {
    const ParamSet up2 = params.shifted(2.0);
    out.c2 = head(up2, x, SeriesParity::even);
    out.s2 = head(up2, x, SeriesParity::odd);
    out.ratio2 = out.ratio1 * shifted_ratio(params, 1.0);
  }
  return out;
}

double ln_factorial(double n) { return std::lgamma(n + 1.0); }

}  // namespace

void validate_thermal(const ThermalSpec& t) {
  if (!(std::isfinite(t.beta) && t.beta > 0.0)) throw ParameterError("beta must be finite and > 0");
  if (!(std::isfinite(t.omega) && t.omega > 0.0)) throw ParameterError("omega must be finite and > 0");
}

std::complex<double> expect_adag_s_a_r(const StateSpec& state, int s, int r, double tol) {
  if (s < 0 || r < 0) throw ParameterError("operator powers s, r must be >= 0");
  require_parity_state(state, "<(a+)^s a^r>");
  if ((s + r) % 2 != 0) return {0.0, 0.0};
  const double x = state.x();
  if (x == 0.0) return {s == 0 && r == 0 ? 1.0 : 0.0, 0.0};

  // Sum over m with c_{m+s}, c_{m+r} both inside the parity sector:
  //   z̄^s z^r / N · Σ_m x^m sqrt((m+s)! (m+r)! / (ρ(m+s) ρ(m+r))) / m!
  const ParamSet& params = state.params();
  const int sector = state.parity() == Parity::even ? 0 : 1;
  const int m0 = ((sector - s) % 2 + 2) % 2;
  const double ln_first = m0 * std::log(x) +
                          0.5 * (ln_factorial(m0 + s) + ln_factorial(m0 + r) - ln_rho(params, m0 + s) -
                                 ln_rho(params, m0 + r)) -
                          ln_factorial(m0);
  const double ln_norm = std::log(hyper_series(params, x, state.parity() == Parity::even ? SeriesParity::even
                                                                                          : SeriesParity::odd,
                                               std::min(tol, kMomentTol))
                                      .value);
  const bool ratio_limited = params.p() == params.q() + 1;

  detail::SeriesAccumulator acc(tol);
  double term = 1.0;
  for (int m = m0;; m += 2) {
    double h = shifted_ratio(params, m + s) * shifted_ratio(params, m + s + 1.0);
    if (s == r) {
      h *= h;
    } else {
      h *= shifted_ratio(params, m + r) * shifted_ratio(params, m + r + 1.0);
    }
    const double ratio = x * x * std::sqrt(h) / ((m + 1.0) * (m + 2.0));
    const double bound = ratio_limited ? std::max(ratio, x * x) : ratio;
    if (acc.add(term, bound)) break;
    if (acc.count() >= static_cast<std::size_t>(kSeriesTermCap)) {
      throw ConvergenceError("<(a+)^s a^r> series did not converge within the term cap",
                             std::fabs(term) / std::max(1.0, std::fabs(acc.sum())));
    }
    term *= ratio;
    if (term == 0.0) break;
  }
  const double ln_prefactor = 0.5 * (s + r) * std::log(x);
  const double magnitude = std::exp(ln_prefactor + ln_first - ln_norm) * acc.sum();
  if (!std::isfinite(magnitude)) throw OverflowError("<(a+)^s a^r> overflowed");
  return std::polar(magnitude, (r - s) * state.phase());
}

double expect_n(const StateSpec& state) {
  require_parity_state(state, "<N>");
  const double x = state.x();
  if (x == 0.0) return 0.0;
  const auto t = shifted_series(state.params(), x, false);
  return state.parity() == Parity::even ? x * t.ratio1 * t.s1 / t.c0 : x * t.ratio1 * t.c1 / t.s0;
}

double expect_n2(const StateSpec& state) {
  require_parity_state(state, "<N^2>");
  const double x = state.x();
  if (x == 0.0) return 0.0;
  const auto t = shifted_series(state.params(), x, true);
  if (state.parity() == Parity::even) return x * x * t.ratio2 * t.c2 / t.c0 + x * t.ratio1 * t.s1 / t.c0;
  return x * x * t.ratio2 * t.s2 / t.s0 + x * t.ratio1 * t.c1 / t.s0;
}

MandelResult mandel_q(const StateSpec& state) {
  require_parity_state(state, "Mandel Q");
  const double x = state.x();
  if (x == 0.0) throw DegenerateStateError("Mandel Q is 0/0 for the even state at z = 0");
  const auto t = shifted_series(state.params(), x, true);
  const double up_ratio = t.ratio2 / t.ratio1;  // Π(a+1) / Π(b+1)
  MandelResult out;
  out.x = x;
  if (state.parity() == Parity::even) {
    out.q_value = x * (up_ratio * t.c2 / t.s1 - t.ratio1 * t.s1 / t.c0);
    out.mean_n = x * t.ratio1 * t.s1 / t.c0;
    out.mean_n2 = x * x * t.ratio2 * t.c2 / t.c0 + out.mean_n;
  } else {
    out.q_value = x * (up_ratio * t.s2 / t.c1 - t.ratio1 * t.c1 / t.s0);
    out.mean_n = x * t.ratio1 * t.c1 / t.s0;
    out.mean_n2 = x * x * t.ratio2 * t.s2 / t.s0 + out.mean_n;
  }
  if (!(out.mean_n > 0.0)) throw DegenerateStateError("Mandel Q undefined: <N> = 0");
  const double from_definition = (out.mean_n2 - out.mean_n * out.mean_n) / out.mean_n - 1.0;
  if (!(std::fabs(from_definition - out.q_value) <= 1e-9 * std::max(1.0, std::fabs(out.q_value)))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "Mandel Q reduced form " << out.q_value << " disagrees with definition " << from_definition
        << " at x = " << x;
    throw std::logic_error(msg.str());
  }
  return out;
}

MandelResult mandel_scan_point(const ParamSet& params, Parity parity, double x) {
  if (parity == Parity::full) throw ParityError("Mandel scan requires an even or odd state");
  if (x == 0.0) {
    // Vacuum for even states, |1> for odd states.
    if (parity == Parity::even) return {1.0, 0.0, 0.0, 0.0};
    return {-1.0, 1.0, 1.0, 0.0};
  }
  return mandel_q(StateSpec::from_x(params, parity, x));
}

std::vector<long long> sample_photon_counts(const StateSpec& state, long long n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw ParameterError("n_samples must be >= 1");
  const auto fock = fock_amplitudes(state);
  if (!(fock.tail_mass_bound < kSamplingTailMass)) {
    throw ConvergenceError("photon distribution could not be truncated at tail mass 1e-12",
                           fock.tail_mass_bound);
  }
  std::vector<long long> support;
  std::vector<double> cdf;
  double total = 0.0;
  for (int n = 0; n <= fock.n_max; ++n) {
    const double p = std::norm(fock.amplitudes[n]);
    if (p == 0.0) continue;
    total += p;
    support.push_back(n);
    cdf.push_back(total);
  }
  std::mt19937_64 rng(seed);
  std::vector<long long> out(static_cast<std::size_t>(n_samples));
  for (auto& v : out) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u * total);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    v = support[idx];
  }
  return out;
}

SampleSummary summarize_samples(const std::vector<long long>& samples, Parity parity) {
  SampleSummary out;
  out.count = static_cast<long long>(samples.size());
  if (samples.empty()) throw ParameterError("no samples to summarize");
  long double sum = 0.0L;
  for (long long v : samples) {
    sum += v;
    if (parity == Parity::even && v % 2 != 0) ++out.parity_violations;
    if (parity == Parity::odd && v % 2 == 0) ++out.parity_violations;
  }
  const long double n = static_cast<long double>(samples.size());
  const long double mu = sum / n;
  long double m2 = 0.0L, m3 = 0.0L, m4 = 0.0L;
  for (long long v : samples) {
    const long double d = v - mu;
    const long double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  out.mean = static_cast<double>(mu);
  out.variance = static_cast<double>(m2);
  out.mean_std_error = static_cast<double>(std::sqrt(m2 / n));
  if (mu > 0.0L) {
    out.q_value = static_cast<double>(m2 / mu - 1.0L);
    // Var(s²/m̄) to first order in the sample moments.
    const long double var_q = ((m4 - m2 * m2) / (mu * mu) + m2 * m2 * m2 / (mu * mu * mu * mu) -
                               2.0L * m2 * m3 / (mu * mu * mu)) / n;
    out.q_std_error = static_cast<double>(std::sqrt(std::max(var_q, 0.0L)));
  } else {
    out.q_value = std::nan("");
    out.q_std_error = std::nan("");
  }
  return out;
}

double thermal_partition(const ThermalSpec& t) {
  validate_thermal(t);
  return -1.0 / std::expm1(-t.beta * t.omega);
}

double thermal_mean_occupation(const ThermalSpec& t) {
  validate_thermal(t);
  return 1.0 / std::expm1(t.beta * t.omega);
}

namespace {

using Poly = std::vector<__int128>;  // coefficients of w^0, w^1, ...

__int128 checked_mul(__int128 a, __int128 b) {
  __int128 out;
  if (__builtin_mul_overflow(a, b, &out)) throw OverflowError("thermal moment polynomial overflowed");
  return out;
}

__int128 checked_add(__int128 a, __int128 b) {
  __int128 out;
  if (__builtin_add_overflow(a, b, &out)) throw OverflowError("thermal moment polynomial overflowed");
  return out;
}

// With y = βω and w = 1/(e^y - 1): Z = 1 + w and -d/dy P(w) = w(1+w) P'(w).
std::vector<Poly> derivative_polys(int r) {
  std::vector<Poly> g{{1, 1}};
  for (int k = 0; k < r; ++k) {
    const Poly& cur = g.back();
    Poly next(cur.size() + 1, 0);
    for (std::size_t i = 1; i < cur.size(); ++i) {
      const __int128 d = checked_mul(cur[i], static_cast<__int128>(i));
      next[i] = checked_add(next[i], d);          // w · P'
      next[i + 1] = checked_add(next[i + 1], d);  // w² · P'
    }
    g.push_back(std::move(next));
  }
  return g;
}

// Divides by (1 + w) exactly; the derivative polynomials are all multiples of it.
Poly divide_one_plus_w(const Poly& p) {
  Poly q(p.size() - 1, 0);
  __int128 carry = 0;
  for (std::size_t i = p.size() - 1; i >= 1; --i) {
    q[i - 1] = p[i] - carry;
    carry = q[i - 1];
  }
  if (p[0] != q[0]) throw std::logic_error("thermal derivative polynomial not divisible by 1 + w");
  return q;
}

double evaluate(const Poly& p, double w) {
  long double v = 0.0L;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * w + static_cast<long double>(*it);
  return static_cast<double>(v);
}

constexpr int kMaxSymbolicOrder = 18;

}  // namespace

double thermal_raw_moment(const ThermalSpec& t, int r) {
  validate_thermal(t);
  if (r < 0) throw ParameterError("moment order must be >= 0");
  if (r > kMaxSymbolicOrder) throw ParameterError("raw thermal moments are available for r <= 18");
  const double w = 1.0 / std::expm1(t.beta * t.omega);
  const auto g = derivative_polys(r);
  if (r == 0) return 1.0;
  return evaluate(divide_one_plus_w(g[r]), w);
}

double thermal_normal_moment(const ThermalSpec& t, int r) {
  validate_thermal(t);
  if (r < 0) throw ParameterError("moment order must be >= 0");
  const double w = 1.0 / std::expm1(t.beta * t.omega);
  if (r == 0) return 1.0;
  if (r > kMaxSymbolicOrder) {
    // Beyond the exact integer range the combination below is known to
    // collapse to r! w^r.
    return std::exp(std::lgamma(r + 1.0) + r * std::log(w));
  }
  // N(N-1)...(N-r+1) = Σ_k s(r,k) N^k with signed Stirling numbers s(r,k).
  std::vector<__int128> stirling{1};
  for (int n = 0; n < r; ++n) {
    std::vector<__int128> next(stirling.size() + 1, 0);
    for (std::size_t k = 0; k < stirling.size(); ++k) {
      next[k + 1] = checked_add(next[k + 1], stirling[k]);
      next[k] = checked_add(next[k], checked_mul(-static_cast<__int128>(n), stirling[k]));
    }
    stirling = std::move(next);
  }
  const auto g = derivative_polys(r);
  Poly combined(r + 2, 0);
  for (int k = 0; k <= r; ++k) {
    for (std::size_t i = 0; i < g[k].size(); ++i) {
      combined[i] = checked_add(combined[i], checked_mul(stirling[k], g[k][i]));
    }
  }
  return evaluate(divide_one_plus_w(combined), w);
}

}  // namespace hgcs
