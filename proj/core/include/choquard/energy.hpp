#pragma once

#include <memory>
#include <vector>

#include "choquard/kernel.hpp"
#include "choquard/params.hpp"

namespace choquard {

/// Scalar functionals and identity residuals of a candidate profile.
/// All integrals are the discrete quadrature forms on [r_min, r_max]; the
/// gradients below are exact derivatives of these discrete values.
struct EnergyReport {
  double kinetic = 0;            ///< int |grad u|^2
  double mass = 0;               ///< int u^2
  double nonlocal_d = 0;         ///< double integral D(u)
  double energy = 0;             ///< I(u) (subcritical) / quotient (critical)
  double nehari_residual = 0;    ///< <I'(u), u> relative (subcritical)
  double pohozaev_residual = 0;  ///< relative Pohozaev defect (subcritical);
                                 ///< weak EL residual (critical)
  double quotient = 0;           ///< critical quotient Q(u)
};

/// omega * sum w_i (u')_i^2 — the discrete Dirichlet form (no origin-cell
/// extrapolation, so that it is an exact quadratic form in the node values).
double kinetic_energy(const RadialFunction& u);

/// omega * sum w_i u_i^2.
double mass_integral(const RadialFunction& u);

/// D(u) = iint |u(x)|^p |u(y)|^p / (|x|^a |x-y|^mu |y|^a) dx dy as the
/// symmetric double quadrature form through the kernel matrix.
double double_integral_D(const RadialFunction& u, double p, double alpha,
                         const KernelMatrix& K);

/// Per-node contributions d_i >= 0 with sum_i d_i = D(u); the radial
/// distribution of the nonlocal mass (used by the concentration rescaling).
std::vector<double> nonlocal_density(const RadialFunction& u, double p,
                                     double alpha, const KernelMatrix& K);

EnergyReport energy_subcritical(const RadialFunction& u,
                                const ProblemParams& params,
                                const KernelMatrix& K);

EnergyReport energy_critical(const RadialFunction& u,
                             const ProblemParams& params,
                             const KernelMatrix& K, const RieszGreen& green);

struct NehariProjection {
  double t = 0;
  RadialFunction projected;
};

/// Scales u onto the Nehari set: t = ((kinetic + mass)/D)^{1/(2p-2)}, so that
/// <I'(t u), t u> = 0 holds exactly in the discrete functional.
NehariProjection nehari_project(const RadialFunction& u,
                                const ProblemParams& params,
                                const KernelMatrix& K);

/// Q(u) = kinetic(u) / D_{2*}(u)^{1/2*}; scale invariant and, for profiles
/// supported away from the grid ends, exactly invariant under grid-ratio
/// dilations.
double critical_quotient(const RadialFunction& u, const ProblemParams& params,
                         const KernelMatrix& K);

/// Exact gradient (covector) of the discrete subcritical energy
/// I(u) = (kinetic + mass)/2 - D/(2p) with respect to the node values.
std::vector<double> subcritical_gradient(const RadialFunction& u,
                                         const ProblemParams& params,
                                         const KernelMatrix& K);

/// Exact gradient of Q at a profile normalized to D(u) = 1, together with the
/// current quotient value.
struct CriticalGradient {
  std::vector<double> grad;
  double quotient = 0;
};
CriticalGradient critical_gradient(const RadialFunction& u_normalized,
                                   const ProblemParams& params,
                                   const KernelMatrix& K);

struct Residual {
  RadialFunction pointwise;
  double weak_norm = 0;
};

/// Pointwise EL residual -Delta u + u - |x|^{-a} w u^{p-1} in the
/// energy-consistent (weak) discretization, and its H^{-1} dual norm
/// restricted to the interior (3 nodes dropped at each end), relative to
/// ||u||_{H^1}.
Residual residual_subcritical(const RadialFunction& u,
                              const ProblemParams& params,
                              const KernelMatrix& K);

/// Critical EL residual after the internal rescaling that sets the Lagrange
/// multiplier to one; dual norm taken in D^{-1,2} through the Green kernel,
/// relative to ||grad u||_2.
Residual residual_critical(const RadialFunction& u,
                           const ProblemParams& params, const KernelMatrix& K,
                           const RieszGreen& green);

/// Signed relative defect of
///   (N-2)/2 kinetic + N/2 mass = (2N-2a-mu)/(2p) D(u).
double pohozaev_residual(const RadialFunction& u, const ProblemParams& params,
                         const KernelMatrix& K);

/// Pohozaev + Nehari coefficient bundle outside the existence range: both
/// coefficients share a sign, so only u == 0 satisfies both identities.
struct NonexistenceReport {
  double kinetic_coeff = 0;  ///< (N-2)/2 - (2N-2a-mu)/(2p)
  double mass_coeff = 0;     ///< N/2   - (2N-2a-mu)/(2p)
  bool forces_zero = false;
};
NonexistenceReport nonexistence_demo(const ProblemParams& params);

/// Discrete weak-form (I - Delta) Gram operator; solves and dual norms for
/// covectors of the discrete H^1 metric.
class H1Metric {
 public:
  explicit H1Metric(GridPtr grid);
  ~H1Metric();
  H1Metric(H1Metric&&) noexcept;

  std::vector<double> solve_covector(const std::vector<double>& cov) const;
  double dual_norm_sq(const std::vector<double>& cov) const;
  const GridPtr& grid() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace choquard
