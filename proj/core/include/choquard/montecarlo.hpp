#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "choquard/params.hpp"

namespace choquard {

/// Importance-sampled estimate with its standard error. Estimates are
/// bit-reproducible: the value depends only on (seed, samples), never on the
/// worker count (counter-based per-sample streams, ordered block reduction).
struct McEstimate {
  double value = 0;
  double std_error = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Pointwise function handle on R^N.
using Field = std::function<double(std::span<const double>)>;

/// Heavy-tailed isotropic proposal (mixture over centers): the radius is
/// drawn as scale * (W/(1-W))^{1/N} from a uniform W, giving the spatial
/// density q0(x) = N / (omega_{N-1} scale^N (1 + (|x|/scale)^N)^2) around
/// each center. Polynomial tails keep the importance ratios integrable for
/// the admissible weight exponents.
struct McProposal {
  double scale = 1.0;
  std::vector<std::vector<double>> centers;  ///< default: the origin
};

/// Unbiased estimate of
///   iint f(x) g(y) / (|x|^alpha |x-y|^mu |y|^beta) dx dy
/// over R^N x R^N. Throws std::runtime_error if the integrand evaluates
/// nonfinite at a sample.
McEstimate mc_double_integral(const Field& f, const Field& g, double alpha,
                              double beta, double mu, int N,
                              std::uint64_t samples, std::uint64_t seed,
                              const McProposal& proposal_x = {},
                              const McProposal& proposal_y = {});

/// Monte Carlo L^p norm (int |f|^p)^{1/p} under the same proposal family.
McEstimate mc_lp_norm(const Field& f, double p, int N, std::uint64_t samples,
                      std::uint64_t seed, const McProposal& proposal = {});

/// Ratio of the weighted double integral to |f|_r |g|_s; finite whenever the
/// exponent balance holds. Throws std::invalid_argument when
/// hls_exponent_check(r, s, alpha, beta, mu, N) fails.
double hls_ratio(const Field& f, const Field& g, double r, double s,
                 double alpha, double beta, double mu, int N,
                 std::uint64_t samples, std::uint64_t seed,
                 const McProposal& proposal_x = {},
                 const McProposal& proposal_y = {});

/// Smooth compactly supported mollifier bump
///   b(r) = amplitude * exp(1 - 1/(1 - (r/radius)^2)) for r < radius, else 0.
struct Bump {
  double amplitude = 1.0;
  double radius = 0.5;
  double operator()(double r) const;
};

/// Two-bump splitting experiment at the upper critical exponent: the defect
///   |D(u + v(. - R e1)) - D(u) - D(v(. - R e1))| / D(u)
/// estimated with shared sample streams (the three evaluations cancel
/// pointwise up to the cross terms, so the defect estimate carries no
/// cancellation noise). Throws std::invalid_argument when the supports
/// intersect.
struct BrezisLiebReport {
  double defect = 0;
  McEstimate d_sum, d_u, d_v;
  McEstimate cross;  ///< D(u+v) - D(u) - D(v), estimated directly
};

BrezisLiebReport brezis_lieb_split(const Bump& u, const Bump& v, double shift,
                                   const ProblemParams& params,
                                   std::uint64_t samples, std::uint64_t seed);

}  // namespace choquard
