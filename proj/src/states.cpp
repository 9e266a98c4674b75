#include "hgcs/states.hpp"

#include <cfloat>
#include <cmath>
#include <sstream>

#include "hgcs/errors.hpp"

namespace hgcs {
namespace {

SeriesParity series_parity(Parity p) {
  switch (p) {
    case Parity::even: return SeriesParity::even;
    case Parity::odd: return SeriesParity::odd;
    case Parity::full: break;
  }
  return SeriesParity::all;
}

bool allowed(Parity p, long long n) {
  if (p == Parity::full) return true;
  return (n % 2 == 0) == (p == Parity::even);
}

double term_ratio(const ParamSet& params, double x, double n) {
  double r = x / (n + 1.0);
  for (double v : params.a()) r *= v + n;
  for (double v : params.b()) r /= v + n;
  return r;
}

}  // namespace

const char* to_string(Parity parity) {
  switch (parity) {
    case Parity::full: return "full";
    case Parity::even: return "even";
    case Parity::odd: return "odd";
  }
  return "?";
}

Parity parse_parity(const std::string& text) {
  if (text == "full") return Parity::full;
  if (text == "even") return Parity::even;
  if (text == "odd") return Parity::odd;
  throw ParameterError("unknown parity '" + text + "' (expected full, even or odd)");
}

StateSpec::StateSpec(ParamSet params, Parity parity, std::complex<double> z)
    : StateSpec(std::move(params), parity, std::abs(z), std::arg(z)) {}

StateSpec::StateSpec(ParamSet params, Parity parity, double modulus, double phase)
    : params_(std::move(params)), parity_(parity), modulus_(modulus), phase_(phase) {
  if (!std::isfinite(modulus_) || modulus_ < 0.0 || !std::isfinite(phase_)) {
    throw DomainError("state label must be finite with nonnegative modulus");
  }
  const double x = modulus_ * modulus_;
  if (x > 0.0) {
    const auto domain = convergence_domain(params_);
    if (domain.kind == DomainKind::divergent) {
      throw DomainError("normalizer " + std::to_string(params_.p()) + "F" + std::to_string(params_.q()) +
                        " diverges for z != 0");
    }
    if (domain.kind == DomainKind::unit_disc && !(x < 1.0)) {
      std::ostringstream msg;
      msg << "|z|^2 = " << x << " outside the unit disc required for p = q + 1";
      throw DomainError(msg.str());
    }
  }
  if (parity_ == Parity::odd && modulus_ == 0.0) {
    throw DomainError("odd state at z = 0 is not normalizable");
  }
}

StateSpec StateSpec::from_x(ParamSet params, Parity parity, double x) {
  if (!(x >= 0.0)) throw DomainError("x = |z|^2 must be >= 0");
  return StateSpec(std::move(params), parity, std::sqrt(x), 0.0);
}

// Amplitudes are normalized near machine precision so the truncated mass
// stays within its certified tail.
constexpr double kAmplitudeNormTol = 1e-15;

SeriesResult normalizer(const StateSpec& state, double tol) {
  return hyper_series(state.params(), state.x(), series_parity(state.parity()), tol);
}

double ln_rho(const ParamSet& params, long long n) {
  if (n < 0) throw ParameterError("rho requires n >= 0");
  double v = std::lgamma(static_cast<double>(n) + 1.0);
  for (double b : params.b()) v += ln_pochhammer(b, n);
  for (double a : params.a()) v -= ln_pochhammer(a, n);
  return v;
}

double rho(const ParamSet& params, long long n) {
  if (n < 0) throw ParameterError("rho requires n >= 0");
  if (n <= 1000) {
    // Direct product; exact for integer parameters while it stays in range.
    double v = 1.0;
    for (long long k = 0; k < n && std::isfinite(v) && v > 0.0; ++k) {
      v *= static_cast<double>(k + 1);
      for (double b : params.b()) v *= b + static_cast<double>(k);
      for (double a : params.a()) v /= a + static_cast<double>(k);
    }
    if (std::isfinite(v) && v >= DBL_MIN) return v;
  }
  const double l = ln_rho(params, n);
  if (std::fabs(l) > std::log(DBL_MAX)) {
    std::ostringstream msg;
    msg << "rho(" << n << ") out of double range (ln rho = " << l << ")";
    throw OverflowError(msg.str());
  }
  return std::exp(l);
}

int default_truncation(const StateSpec& state) {
  const double x = state.x();
  if (x == 0.0) return 0;
  double term = 1.0;
  double partial = 0.0;
  for (int n = 0; n < kMaxFockTruncation; ++n) {
    const double r = term_ratio(state.params(), x, n);
    if (allowed(state.parity(), n)) {
      partial += term;
      if (n > 0 && term < 1e-16 * partial && r < 1.0) return n;
    }
    term *= r;
  }
  return kMaxFockTruncation;
}

FockAmplitudes fock_amplitudes(const StateSpec& state, std::optional<int> n_max) {
  const int n_cut = n_max.value_or(default_truncation(state));
  if (n_cut < 0) throw ParameterError("fock truncation must be >= 0");
  FockAmplitudes out;
  out.n_max = n_cut;
  out.amplitudes.assign(static_cast<std::size_t>(n_cut) + 1, {0.0, 0.0});
  const double x = state.x();
  if (x == 0.0) {
    out.amplitudes[0] = 1.0;  // vacuum; odd states at z = 0 are rejected earlier
    return out;
  }
  const auto norm = normalizer(state, kAmplitudeNormTol);
  double term = 1.0;
  double partial = 0.0;
  for (int n = 0; n <= n_cut; ++n) {
    if (allowed(state.parity(), n)) {
      partial += term;
      out.amplitudes[n] = std::polar(std::sqrt(term / norm.value), n * state.phase());
    }
    term *= term_ratio(state.params(), x, n);
  }
  // Remainder of the normalizer past n_cut, its truncation estimate, and a
  // rounding allowance for the partial sum.
  const double remainder = std::max(0.0, norm.value - partial) + norm.abs_error_estimate;
  out.tail_mass_bound = remainder / norm.value + 4.0 * DBL_EPSILON * (n_cut + 1);
  return out;
}

double photon_distribution(const StateSpec& state, long long n) {
  if (n < 0) throw ParameterError("photon number must be >= 0");
  if (!allowed(state.parity(), n)) return 0.0;
  const double x = state.x();
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  const double norm = normalizer(state, kAmplitudeNormTol).value;
  return std::exp(static_cast<double>(n) * std::log(x) - ln_rho(state.params(), n) - std::log(norm));
}

OverlapResult overlap(const StateSpec& s1, const StateSpec& s2, int n_max) {
  if (!(s1.params() == s2.params())) throw ParameterError("overlap requires identical parameter sets");
  const bool opposite = (s1.parity() == Parity::even && s2.parity() == Parity::odd) ||
                        (s1.parity() == Parity::odd && s2.parity() == Parity::even);
  if (opposite) return {{0.0, 0.0}, 0.0};
  const auto c1 = fock_amplitudes(s1, n_max);
  const auto c2 = fock_amplitudes(s2, n_max);
  std::complex<double> sum{0.0, 0.0};
  for (int n = 0; n <= n_max; ++n) sum += std::conj(c1.amplitudes[n]) * c2.amplitudes[n];
  return {sum, std::sqrt(c1.tail_mass_bound * c2.tail_mass_bound)};
}

Annihilation annihilate(const StateSpec& state) {
  if (state.parity() == Parity::full) {
    throw ParityError("annihilation identity is stated for even and odd states only");
  }
  if (state.modulus() == 0.0) return {{0.0, 0.0}, std::nullopt};
  const ParamSet up = state.params().shifted(1.0);
  const Parity flipped = state.parity() == Parity::even ? Parity::odd : Parity::even;
  StateSpec image(up, flipped, state.modulus(), state.phase());
  const double ratio = normalizer(image, kAmplitudeNormTol).value / normalizer(state, kAmplitudeNormTol).value;
  const double mag = state.modulus() * std::sqrt(state.params().ratio_product() * ratio);
  return {std::polar(mag, state.phase()), std::move(image)};
}

}  // namespace hgcs
