#pragma once

#include <string>
#include <vector>

namespace hgcs {

/// Numerator list a_1..a_p and denominator list b_1..b_q of a generalized
/// hypergeometric family. Every entry is strictly positive; the constructor
/// throws ParameterError naming the first offending entry otherwise.
class ParamSet {
 public:
  ParamSet() = default;
  ParamSet(std::vector<double> a, std::vector<double> b);

  const std::vector<double>& a() const noexcept { return a_; }
  const std::vector<double>& b() const noexcept { return b_; }
  int p() const noexcept { return static_cast<int>(a_.size()); }
  int q() const noexcept { return static_cast<int>(b_.size()); }

  /// Every parameter shifted by `k` (used by the lowering-operator identities).
  ParamSet shifted(double k) const;

  /// Π a_i / Π b_j.
  double ratio_product() const;

  /// Π (b_j + n) / Π (a_i + n), the consecutive-ρ ratio divided by (n+1).
  double step_ratio(double n) const;

  /// "a1,a2/b1" form accepted by the CLI.
  std::string to_string() const;
  static ParamSet parse(const std::string& text);

  friend bool operator==(const ParamSet&, const ParamSet&) = default;

 private:
  std::vector<double> a_;
  std::vector<double> b_;
};

/// Checks positivity and returns the validated copy.
ParamSet validate_params(std::vector<double> a, std::vector<double> b);

}  // namespace hgcs
