#pragma once

#include <vector>

#include "choquard/params.hpp"

namespace choquard {

/// Upper critical exponent (2N - 2*alpha - mu)/(N - 2).
double upper_critical(int N, double alpha, double mu);

/// Lower critical exponent 2 - (2*alpha + mu)/N.
double lower_critical(int N, double alpha, double mu);

enum class Existence { Exists, NonexistenceByPohozaev };

const char* to_string(Existence verdict);

/// Existence range of the subcritical ground state. Requires params.p.
/// The boundary cases p == upper/lower critical are classified as
/// NonexistenceByPohozaev (the Pohozaev identity argument uses closed
/// conditions).
Existence existence_verdict(const ProblemParams& params);

/// Open interval (lo, hi); hi may be +infinity.
struct Interval {
  double lo = 0;
  double hi = 0;
  bool contains(double x) const { return x > lo && x < hi; }
  bool empty() const { return !(lo < hi); }
};

enum class RegularityCase { C1, C2, C3, C4 };

const char* to_string(RegularityCase c);

/// Integrability classification of a positive solution pair (u, v):
/// u in L^p for p in p_interval, v in L^q for q in q_interval.
struct RegularityVerdict {
  RegularityCase case_label = RegularityCase::C1;
  Interval p_interval;
  Interval q_interval;
};

/// Resolves the regularity case for (N, 2*alpha + mu). Cases are matched in
/// order C1, C2, C3, C4; boundary points shared by two cases resolve to the
/// first match (the printed intervals coincide there). Throws
/// std::domain_error when (N, 2*alpha + mu) is covered by no case.
RegularityVerdict regularity_class(int N, double alpha, double mu);

/// Exponent balance test for the doubly weighted convolution inequality
///   iint f(x) h(y) / (|x|^a |x-y|^mu |y|^b) <= C |f|_r |h|_s.
/// True iff 1/r + 1/s + (a+b+mu)/N = 2 (to 1e-12 relative), r,s > 1,
/// 0 < mu < N, a+b >= 0, a+b+mu <= N and 1 - 1/r - mu/N < a/N < 1 - 1/r.
bool hls_exponent_check(double r, double s, double alpha, double beta,
                        double mu, int N);

/// Integrability bootstrap 1/r_{n+1} = (p-1)(1/r_n - 2/N) started from
/// 1/r_0 = (N - mu - 2*alpha)/N * (1 - 1/p), iterated until r_n >= N/2.
/// A step with nonpositive reciprocal terminates the recursion with
/// r = +infinity.
struct BootstrapTrace {
  std::vector<double> r;      ///< r_0, r_1, ..., last >= N/2 (may be +inf)
  std::vector<double> inv_r;  ///< raw reciprocals, strictly decreasing
  std::size_t steps() const { return r.empty() ? 0 : r.size() - 1; }
};

BootstrapTrace bootstrap_iteration(int N, double alpha, double mu, double p);

/// Pointwise decay coefficient C such that any nonnegative normalized
/// minimizer of the critical quotient satisfies u(|x|) <= C |x|^{-(N-2)/2}:
///   C = [(N - alpha) 2^{2 mu} / omega_{N-1}^2]^{1/(2 * 2*_{alpha,mu})}.
/// Requires 0 < 2*alpha + mu <= min(4, N).
double decay_constant(int N, double alpha, double mu);

/// Alternative printed form [(N - alpha)^2 2^mu / omega_{N-1}^2]^{1/(2-2a-mu)}
/// of the same bound, exposed for comparison; undefined at 2*alpha + mu == 2.
double decay_constant_statement(int N, double alpha, double mu);

}  // namespace choquard
