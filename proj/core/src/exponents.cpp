#include "choquard/exponents.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "choquard/grid.hpp"

namespace choquard {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_base_params(int N, double alpha, double mu) {
  ProblemParams params;
  params.N = N;
  params.alpha = alpha;
  params.mu = mu;
  require_valid(params);
}

// 2N/den with the convention that a nonpositive denominator means +infinity
// (the interval endpoint comes from a reciprocal bound that degenerates).
double endpoint(double num, double den) { return den > 0 ? num / den : kInf; }

}  // namespace

double upper_critical(int N, double alpha, double mu) {
  require_base_params(N, alpha, mu);
  return (2.0 * N - 2.0 * alpha - mu) / (N - 2.0);
}

double lower_critical(int N, double alpha, double mu) {
  require_base_params(N, alpha, mu);
  return 2.0 - (2.0 * alpha + mu) / N;
}

const char* to_string(Existence verdict) {
  return verdict == Existence::Exists ? "Exists" : "NonexistenceByPohozaev";
}

Existence existence_verdict(const ProblemParams& params) {
  require_base_params(params.N, params.alpha, params.mu);
  if (!params.p)
    throw std::invalid_argument("existence_verdict requires an explicit p");
  const double lower = lower_critical(params.N, params.alpha, params.mu);
  const double upper = upper_critical(params.N, params.alpha, params.mu);
  if (*params.p >= upper || *params.p <= lower)
    return Existence::NonexistenceByPohozaev;
  return Existence::Exists;
}

const char* to_string(RegularityCase c) {
  switch (c) {
    case RegularityCase::C1: return "C1";
    case RegularityCase::C2: return "C2";
    case RegularityCase::C3: return "C3";
    case RegularityCase::C4: return "C4";
  }
  return "?";
}

RegularityVerdict regularity_class(int N, double alpha, double mu) {
  require_base_params(N, alpha, mu);
  const double T = 2.0 * alpha + mu;  // combined weight 2*alpha + mu
  const double n = N;

  // (C1)  N in {3..6},  N-2 <= T <= min(N, 4)
  if (N <= 6 && T >= N - 2 && T <= std::min(n, 4.0)) {
    return {RegularityCase::C1,
            {n / (n - 2), kInf},
            {2 * n / (n - 2 + T), endpoint(2 * n, 2 + T - n)}};
  }
  // (C2)  N in {5,6} with 4 < T <= N, or N >= 7 with N-2 <= T <= N
  if ((N <= 6 && N >= 5 && T > 4 && T <= n) || (N >= 7 && T >= n - 2 && T <= n)) {
    return {RegularityCase::C2,
            {n / (n - 2), endpoint(2 * n, T - 4)},
            {2 * n / (n - 2 + T), endpoint(2 * n, 2 * T - n - 2)}};
  }
  // (C3)  N in {3..6} with 0 < T < N-2, or N >= 7 with T <= 4 or
  //       (N+2)/2 <= T < N-2
  if ((N <= 6 && T > 0 && T < n - 2) ||
      (N >= 7 && T > 0 && (T <= 4 || (T >= (n + 2) / 2 && T < n - 2)))) {
    return {RegularityCase::C3,
            {2 * n / (n - 2 + T), endpoint(2 * n, n - 2 - T)},
            {n / T, kInf}};
  }
  // (C4)  N >= 7 with 4 < T < (N+2)/2
  if (N >= 7 && T > 4 && T < (n + 2) / 2) {
    return {RegularityCase::C4,
            {2 * n / (n - 2 + T), endpoint(2 * n, T - 4)},
            {n / T, endpoint(2 * n, 2 * T - n - 2)}};
  }
  throw std::domain_error("regularity_class: (N, 2*alpha+mu) uncovered");
}

bool hls_exponent_check(double r, double s, double alpha, double beta,
                        double mu, int N) {
  if (!(r > 1 && s > 1)) return false;
  if (!(mu > 0 && mu < N)) return false;
  if (!(alpha + beta >= 0)) return false;
  if (!(alpha + beta + mu <= N)) return false;
  const double balance = 1 / r + 1 / s + (alpha + beta + mu) / N;
  if (std::abs(balance - 2) > 1e-12 * 2) return false;
  const double a_over_n = alpha / N;
  return a_over_n > 1 - 1 / r - mu / N && a_over_n < 1 - 1 / r;
}

BootstrapTrace bootstrap_iteration(int N, double alpha, double mu, double p) {
  ProblemParams params;
  params.N = N;
  params.alpha = alpha;
  params.mu = mu;
  params.p = p;
  require_valid(params);

  BootstrapTrace trace;
  double inv = (N - mu - 2 * alpha) / N * (1 - 1 / p);
  trace.inv_r.push_back(inv);
  trace.r.push_back(inv > 0 ? 1 / inv : kInf);
  const double target = N / 2.0;
  std::size_t guard = 0;
  while (trace.r.back() < target) {
    if (++guard > 1000)
      throw std::runtime_error("bootstrap_iteration did not terminate");
    inv = (p - 1) * (inv - 2.0 / N);
    trace.inv_r.push_back(inv);
    trace.r.push_back(inv > 0 ? 1 / inv : kInf);
  }
  return trace;
}

namespace {

void require_decay_range(int N, double alpha, double mu) {
  require_base_params(N, alpha, mu);
  const double T = 2 * alpha + mu;
  if (!(T > 0 && T <= std::min(4.0, double(N))))
    throw std::domain_error(
        "decay_constant requires 0 < 2*alpha + mu <= min(4, N)");
}

}  // namespace

double decay_constant(int N, double alpha, double mu) {
  require_decay_range(N, alpha, mu);
  const double omega = sphere_area(N);
  const double uc = upper_critical(N, alpha, mu);
  return std::pow((N - alpha) * std::pow(2.0, 2 * mu) / (omega * omega),
                  1.0 / (2 * uc));
}

double decay_constant_statement(int N, double alpha, double mu) {
  require_decay_range(N, alpha, mu);
  const double e = 2 - 2 * alpha - mu;
  if (e == 0)
    throw std::domain_error(
        "decay_constant_statement undefined at 2*alpha + mu == 2");
  const double omega = sphere_area(N);
  return std::pow((N - alpha) * (N - alpha) * std::pow(2.0, mu) /
                      (omega * omega),
                  1.0 / e);
}

}  // namespace choquard
