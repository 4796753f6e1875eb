#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "choquard/energy.hpp"
#include "choquard/grid.hpp"
#include "choquard/kernel.hpp"
#include "choquard/params.hpp"

namespace choquard {

struct SolverConfig {
  int max_iter = 2000;     ///< iteration budget
  double tol = 1e-9;       ///< relative weak-residual / profile-change target
  double step = 1.0;       ///< initial gradient step (backtracked)
  int rescale_every = 50;  ///< iterations between concentration rescalings
  std::uint64_t seed = 1;  ///< seed for randomized initial profiles
};

struct DecayReport {
  double slope = 0;                ///< least-squares slope of log u vs log r
  bool bound_checked = false;      ///< pointwise bound evaluated?
  bool bound_ok = false;           ///< u <= C r^{-(N-2)/2} on the window
  double violation_fraction = 0;   ///< fraction of window nodes violating
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> energy_history;  ///< I(u) / Q(u) after each iteration
  EnergyReport final_energy;
  DecayReport decay;
  std::string method;
  std::vector<std::string> warnings;
};

struct SolveResult {
  RadialFunction u;
  SolveReport report;
};

enum class InitPreset { Gaussian, Bubble, Random };

/// Builds a positive initial profile; Random draws a deterministic Gaussian
/// mixture from the seed.
RadialFunction make_init(GridPtr grid, InitPreset preset, std::uint64_t seed);

/// Nehari-projected H^1 gradient flow for the subcritical ground state:
/// preconditioned descent u <- u - step * g with (I-Delta) g = I'(u) in the
/// discrete weak form, |.| positivity, Nehari projection each step.
/// Requires an existence-range p. The returned profile carries the physical
/// scale (Nehari normalization).
SolveResult solve_subcritical(const ProblemParams& params,
                              const KernelMatrix& K, const SolverConfig& cfg,
                              const RadialFunction& init);

/// Projected descent for the critical quotient on the constraint D(u) = 1 in
/// the D^{1,2} metric, with the half-mass concentration rescaling applied
/// every rescale_every iterations (a grid-exact dilation). Returns the
/// D-normalized minimizer.
SolveResult solve_critical(const ProblemParams& params, const KernelMatrix& K,
                           const SolverConfig& cfg, const RadialFunction& init);

/// Integral-system fixed-point iteration (independent of the gradient flow):
/// subcritical sweeps u <- (I-Delta)^{-1}(|x|^{-a} w u^{p-1}) renormalized to
/// unit H^1; critical sweeps through the -Delta Green kernel renormalized to
/// D(u) = 1. Converges when the per-sweep profile change drops below tol.
SolveResult solve_fixed_point(const ProblemParams& params,
                              const KernelMatrix& K, const SolverConfig& cfg,
                              const RadialFunction& init);

/// Least-squares slope of log u against log r over window nodes with u > 0.
DecayReport fit_decay(const RadialFunction& u, double window_lo,
                      double window_hi);

/// As above, additionally checking the pointwise bound
/// u(r) <= decay_constant(N, alpha, mu) r^{-(N-2)/2} at every window node
/// (the profile must carry the D(u) = 1 normalization). bound_ok tolerates a
/// 5% node violation fraction as discretization slack.
DecayReport fit_decay(const RadialFunction& u, double window_lo,
                      double window_hi, const ProblemParams& params);

}  // namespace choquard
