#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "hgcs/states.hpp"

namespace hgcs {

struct MandelResult {
  double q_value = 0.0;
  double mean_n = 0.0;
  double mean_n2 = 0.0;
  double x = 0.0;
};

/// Thermal state of H = ω a†a at inverse temperature β (ħ = 1).
struct ThermalSpec {
  double beta = 1.0;
  double omega = 1.0;
};

/// Throws ParameterError unless beta and omega are finite and positive.
void validate_thermal(const ThermalSpec& t);

/// ⟨(a†)^s a^r⟩ in an even or odd state. Zero whenever s + r is odd.
/// Throws ParityError for full states.
std::complex<double> expect_adag_s_a_r(const StateSpec& state, int s, int r, double tol = kDefaultSeriesTol);

double expect_n(const StateSpec& state);
double expect_n2(const StateSpec& state);

/// Mandel Q from the reduced two-term forms, cross-checked against the
/// definition. Throws DegenerateStateError when ⟨N⟩ = 0.
MandelResult mandel_q(const StateSpec& state);

/// Same as mandel_q for x > 0; at x = 0 returns the limits Q_e = 1 and
/// Q_o = -1 with the vacuum or one-photon moments.
MandelResult mandel_scan_point(const ParamSet& params, Parity parity, double x);

inline constexpr double kSamplingTailMass = 1e-12;

/// Inverse-CDF draws from the photon distribution truncated at tail mass
/// kSamplingTailMass and renormalized. Deterministic for a fixed seed.
std::vector<long long> sample_photon_counts(const StateSpec& state, long long n_samples, std::uint64_t seed);

struct SampleSummary {
  long long count = 0;
  double mean = 0.0;
  double variance = 0.0;  // population (1/n) central moment
  double q_value = 0.0;
  double mean_std_error = 0.0;
  double q_std_error = 0.0;  // delta method from the sample central moments
  long long parity_violations = 0;
};

SampleSummary summarize_samples(const std::vector<long long>& samples, Parity parity);

/// Z = 1 / (1 - e^{-βω}).
double thermal_partition(const ThermalSpec& t);

/// 1 / (e^{βω} - 1).
double thermal_mean_occupation(const ThermalSpec& t);

/// ⟨N^r⟩ = (1 - e^{-βω}) (-∂/∂(βω))^r Z, from the exact derivative
/// polynomials in w = 1/(e^{βω} - 1).
double thermal_raw_moment(const ThermalSpec& t, int r);

/// ⟨(a†)^r a^r⟩, the raw derivative polynomials combined with signed
/// Stirling numbers of the first kind before evaluation.
double thermal_normal_moment(const ThermalSpec& t, int r);

}  // namespace hgcs
