#include "choquard/params.hpp"

#include <sstream>
#include <stdexcept>

#include "choquard/exponents.hpp"

namespace choquard {

std::vector<std::string> validate_params(const ProblemParams& params) {
  std::vector<std::string> violations;
  if (params.N < 3) violations.push_back("N >= 3");
  if (!(params.alpha >= 0)) violations.push_back("alpha >= 0");
  if (!(params.mu > 0 && params.mu < params.N))
    violations.push_back("0 < mu < N");
  if (!(2 * params.alpha + params.mu <= params.N))
    violations.push_back("2*alpha + mu <= N");
  if (params.p && violations.empty()) {
    const double lower = lower_critical(params.N, params.alpha, params.mu);
    const double upper = upper_critical(params.N, params.alpha, params.mu);
    if (!(*params.p > lower))
      violations.push_back("p > lower critical exponent 2 - (2*alpha+mu)/N");
    if (!(*params.p < upper))
      violations.push_back(
          "p < upper critical exponent (2N-2*alpha-mu)/(N-2)");
  }
  return violations;
}

void require_valid(const ProblemParams& params) {
  const auto violations = validate_params(params);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid parameters:";
  for (const auto& v : violations) msg << " [" << v << "]";
  throw std::invalid_argument(msg.str());
}

}  // namespace choquard
