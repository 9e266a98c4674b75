#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "hgcs/params.hpp"
#include "hgcs/special_functions.hpp"

namespace hgcs {

enum class Parity { full, even, odd };

const char* to_string(Parity parity);
Parity parse_parity(const std::string& text);

/// Label of a generalized hypergeometric coherent state |p,q,z⟩ or its
/// even/odd projection. The label is stored in polar form; every quantity
/// depends on x = |z|^2 and on the phases z^n = |z|^n e^{i n arg z}.
class StateSpec {
 public:
  /// Throws DomainError if |z|^2 is outside the convergence domain or if an
  /// odd state is requested at z = 0.
  StateSpec(ParamSet params, Parity parity, std::complex<double> z);
  StateSpec(ParamSet params, Parity parity, double modulus, double phase);

  /// Real positive label z = sqrt(x).
  static StateSpec from_x(ParamSet params, Parity parity, double x);

  const ParamSet& params() const noexcept { return params_; }
  Parity parity() const noexcept { return parity_; }
  double modulus() const noexcept { return modulus_; }
  double phase() const noexcept { return phase_; }
  double x() const noexcept { return modulus_ * modulus_; }
  std::complex<double> z() const { return std::polar(modulus_, phase_); }

 private:
  ParamSet params_;
  Parity parity_;
  double modulus_;
  double phase_;
};

/// Fock coefficients c_0..c_{n_max}. Σ|c_n|^2 <= 1 <= Σ|c_n|^2 + tail_mass_bound.
struct FockAmplitudes {
  int n_max = 0;
  std::vector<std::complex<double>> amplitudes;
  double tail_mass_bound = 0.0;
};

inline constexpr int kMaxFockTruncation = 5'000;

/// pFq, pCq or pSq at x = |z|^2 according to the parity.
SeriesResult normalizer(const StateSpec& state, double tol = kDefaultSeriesTol);

/// ln ρ(n) = ln n! + Σ ln (b_j)_n - Σ ln (a_i)_n.
double ln_rho(const ParamSet& params, long long n);

/// ρ(n) = n! Π(b_j)_n / Π(a_i)_n; throws OverflowError when it leaves the
/// double range.
double rho(const ParamSet& params, long long n);

/// Smallest n whose parity-allowed term falls below 1e-16 of the partial
/// normalizer past the peak, capped at kMaxFockTruncation.
int default_truncation(const StateSpec& state);

FockAmplitudes fock_amplitudes(const StateSpec& state, std::optional<int> n_max = std::nullopt);

/// |⟨n|state⟩|^2.
double photon_distribution(const StateSpec& state, long long n);

struct OverlapResult {
  std::complex<double> value;
  double tail_bound = 0.0;
};

/// ⟨s1|s2⟩ truncated at n_max, with a Cauchy-Schwarz bound on the remainder.
OverlapResult overlap(const StateSpec& s1, const StateSpec& s2, int n_max);

/// a|state⟩ = prefactor |image⟩ for parity states. The image has the opposite
/// parity and every parameter shifted by +1. At z = 0 the prefactor is zero
/// and there is no image.
struct Annihilation {
  std::complex<double> prefactor;
  std::optional<StateSpec> image;
};

Annihilation annihilate(const StateSpec& state);

}  // namespace hgcs
