#pragma once

#include <optional>
#include <string>
#include <vector>

namespace choquard {

/// Parameter tuple (N, alpha, mu[, p]) consumed by every formula in the
/// library. An absent p selects the critical problem, where the nonlinearity
/// exponent is implicitly the upper critical exponent.
struct ProblemParams {
  int N = 3;         ///< space dimension, N >= 3
  double alpha = 0;  ///< weight exponent |x|^{-alpha}, alpha >= 0
  double mu = 1;     ///< kernel exponent |x-y|^{-mu}, 0 < mu < N
  std::optional<double> p{};  ///< nonlinearity exponent (subcritical mode)

  bool critical() const { return !p.has_value(); }
};

/// Returns the list of violated admissibility constraints, empty when the
/// parameters are admissible. When p is present it must lie strictly between
/// the lower and upper critical exponents.
std::vector<std::string> validate_params(const ProblemParams& params);

/// Throws std::invalid_argument listing every violated constraint.
void require_valid(const ProblemParams& params);

}  // namespace choquard
