#include "choquard/energy.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <stdexcept>

#include "choquard/exponents.hpp"

namespace choquard {

namespace {

constexpr double kTiny = 1e-300;

std::vector<double> apply_stencil(const DerivativeStencil& st,
                                  const std::vector<double>& u) {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto j = st.start[i];
    out[i] = st.coeff[i][0] * u[j] + st.coeff[i][1] * u[j + 1] +
             st.coeff[i][2] * u[j + 2];
  }
  return out;
}

std::vector<double> apply_stencil_transpose(const DerivativeStencil& st,
                                            const std::vector<double>& v) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto j = st.start[i];
    out[j] += st.coeff[i][0] * v[i];
    out[j + 1] += st.coeff[i][1] * v[i];
    out[j + 2] += st.coeff[i][2] * v[i];
  }
  return out;
}

void check_kernel(const ProblemParams& params, const KernelMatrix& K,
                  const RadialFunction& u) {
  if (u.grid != K.grid())
    throw std::invalid_argument("energy: profile and kernel grids differ");
  if (K.dimension() != params.N || K.mu() != params.mu)
    throw std::invalid_argument("energy: kernel assembled for other params");
}

// Covector of the kinetic quadratic form: 2 omega S^T (w .* S u).
std::vector<double> kinetic_gradient(const RadialFunction& u) {
  const auto& g = *u.grid;
  const auto st = derivative_stencil(g);
  auto du = apply_stencil(st, u.values);
  for (std::size_t i = 0; i < du.size(); ++i) du[i] *= g.weight(i);
  auto out = apply_stencil_transpose(st, du);
  const double two_omega = 2 * sphere_area(g.dimension());
  for (double& v : out) v *= two_omega;
  return out;
}

}  // namespace

double kinetic_energy(const RadialFunction& u) {
  const auto& g = *u.grid;
  const auto st = derivative_stencil(g);
  const auto du = apply_stencil(st, u.values);
  double sum = 0;
  for (std::size_t i = 0; i < du.size(); ++i)
    sum += g.weight(i) * du[i] * du[i];
  return sphere_area(g.dimension()) * sum;
}

double mass_integral(const RadialFunction& u) {
  const auto& g = *u.grid;
  double sum = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    sum += g.weight(i) * u.values[i] * u.values[i];
  return sphere_area(g.dimension()) * sum;
}

std::vector<double> nonlocal_density(const RadialFunction& u, double p,
                                     double alpha, const KernelMatrix& K) {
  const auto w = weighted_potential(u, p, alpha, K);
  const auto& g = *u.grid;
  const double omega = sphere_area(g.dimension());
  std::vector<double> d(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    d[i] = omega * g.weight(i) * std::pow(g.node(i), -alpha) *
           std::pow(std::abs(u.values[i]), p) * w.values[i];
  return d;
}

double double_integral_D(const RadialFunction& u, double p, double alpha,
                         const KernelMatrix& K) {
  if (u.grid != K.grid())
    throw std::invalid_argument("double_integral_D: grid mismatch");
  const auto d = nonlocal_density(u, p, alpha, K);
  double sum = 0;
  for (double v : d) sum += v;
  return sum;
}

double critical_quotient(const RadialFunction& u, const ProblemParams& params,
                         const KernelMatrix& K) {
  check_kernel(params, K, u);
  const double uc = upper_critical(params.N, params.alpha, params.mu);
  const double kin = kinetic_energy(u);
  const double d = double_integral_D(u, uc, params.alpha, K);
  if (kin == 0 && d == 0) return 0;
  if (d <= 0) throw std::invalid_argument("critical_quotient: zero profile");
  return kin / std::pow(d, 1 / uc);
}

EnergyReport energy_subcritical(const RadialFunction& u,
                                const ProblemParams& params,
                                const KernelMatrix& K) {
  check_kernel(params, K, u);
  if (!params.p)
    throw std::invalid_argument("energy_subcritical requires params.p");
  const double p = *params.p;
  EnergyReport rep;
  rep.kinetic = kinetic_energy(u);
  rep.mass = mass_integral(u);
  rep.nonlocal_d = double_integral_D(u, p, params.alpha, K);
  rep.energy = (rep.kinetic + rep.mass) / 2 - rep.nonlocal_d / (2 * p);
  rep.nehari_residual = (rep.kinetic + rep.mass - rep.nonlocal_d) /
                        std::max(rep.kinetic + rep.mass, kTiny);
  rep.pohozaev_residual = pohozaev_residual(u, params, K);
  const double uc = upper_critical(params.N, params.alpha, params.mu);
  const double d_star = double_integral_D(u, uc, params.alpha, K);
  rep.quotient = d_star > 0 ? rep.kinetic / std::pow(d_star, 1 / uc) : 0;
  return rep;
}

EnergyReport energy_critical(const RadialFunction& u,
                             const ProblemParams& params,
                             const KernelMatrix& K, const RieszGreen& green) {
  check_kernel(params, K, u);
  const double uc = upper_critical(params.N, params.alpha, params.mu);
  EnergyReport rep;
  rep.kinetic = kinetic_energy(u);
  rep.mass = mass_integral(u);
  rep.nonlocal_d = double_integral_D(u, uc, params.alpha, K);
  rep.quotient =
      rep.nonlocal_d > 0 ? rep.kinetic / std::pow(rep.nonlocal_d, 1 / uc) : 0;
  rep.energy = rep.quotient;
  rep.nehari_residual = 0;  // not applicable on the critical constraint
  rep.pohozaev_residual =
      rep.nonlocal_d > 0 ? residual_critical(u, params, K, green).weak_norm : 0;
  return rep;
}

NehariProjection nehari_project(const RadialFunction& u,
                                const ProblemParams& params,
                                const KernelMatrix& K) {
  check_kernel(params, K, u);
  if (!params.p)
    throw std::invalid_argument("nehari_project requires params.p");
  const double p = *params.p;
  const double norm_sq = kinetic_energy(u) + mass_integral(u);
  if (norm_sq <= 0)
    throw std::invalid_argument("nehari_project: zero profile");
  const double d = double_integral_D(u, p, params.alpha, K);
  if (d <= 0)
    throw std::invalid_argument("nehari_project: vanishing nonlocal term");
  NehariProjection proj;
  proj.t = std::pow(norm_sq / d, 1 / (2 * p - 2));
  proj.projected = u;
  for (double& v : proj.projected.values) v *= proj.t;
  return proj;
}

std::vector<double> subcritical_gradient(const RadialFunction& u,
                                         const ProblemParams& params,
                                         const KernelMatrix& K) {
  check_kernel(params, K, u);
  const double p = *params.p;
  const auto& g = *u.grid;
  const double omega = sphere_area(g.dimension());
  auto grad = kinetic_gradient(u);  // d(kinetic)
  const auto w = weighted_potential(u, p, params.alpha, K);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double ui = u.values[i];
    const double nonlinear = std::pow(g.node(i), -params.alpha) * w.values[i] *
                             std::copysign(std::pow(std::abs(ui), p - 1), ui);
    // d/du of (kin + mass)/2 - D/(2p)
    grad[i] = grad[i] / 2 + omega * g.weight(i) * (ui - nonlinear);
  }
  return grad;
}

CriticalGradient critical_gradient(const RadialFunction& u,
                                   const ProblemParams& params,
                                   const KernelMatrix& K) {
  check_kernel(params, K, u);
  const double uc = upper_critical(params.N, params.alpha, params.mu);
  const auto& g = *u.grid;
  const double omega = sphere_area(g.dimension());
  CriticalGradient out;
  out.quotient = kinetic_energy(u);  // D(u) = 1 assumed
  out.grad = kinetic_gradient(u);
  const auto w = weighted_potential(u, uc, params.alpha, K);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double ui = u.values[i];
    const double nonlinear = std::pow(g.node(i), -params.alpha) * w.values[i] *
                             std::copysign(std::pow(std::abs(ui), uc - 1), ui);
    out.grad[i] -= 2 * out.quotient * omega * g.weight(i) * nonlinear;
  }
  return out;
}

namespace {

// Pointwise residual from a covector: R_i = cov_i / (omega w_i).
RadialFunction covector_to_pointwise(const GridPtr& grid,
                                     const std::vector<double>& cov) {
  const double omega = sphere_area(grid->dimension());
  RadialFunction r(grid);
  for (std::size_t i = 0; i < cov.size(); ++i)
    r.values[i] = cov[i] / (omega * grid->weight(i));
  return r;
}

std::vector<double> mask_boundary(std::vector<double> cov) {
  const std::size_t n = cov.size();
  const std::size_t m = std::min<std::size_t>(3, n / 2);
  for (std::size_t i = 0; i < m; ++i) {
    cov[i] = 0;
    cov[n - 1 - i] = 0;
  }
  return cov;
}

}  // namespace

Residual residual_subcritical(const RadialFunction& u,
                              const ProblemParams& params,
                              const KernelMatrix& K) {
  check_kernel(params, K, u);
  if (!params.p)
    throw std::invalid_argument("residual_subcritical requires params.p");
  // I'(u) as a covector; the pointwise residual is its Riesz representative
  // in the quadrature measure.
  const auto grad = subcritical_gradient(u, params, K);
  Residual res;
  res.pointwise = covector_to_pointwise(u.grid, grad);
  const auto masked = mask_boundary(grad);
  H1Metric metric(u.grid);
  const double dual_sq = metric.dual_norm_sq(masked);
  const double norm = std::sqrt(
      std::max(kinetic_energy(u) + mass_integral(u), kTiny));
  res.weak_norm = std::sqrt(std::max(dual_sq, 0.0)) / norm;
  return res;
}

Residual residual_critical(const RadialFunction& u,
                           const ProblemParams& params, const KernelMatrix& K,
                           const RieszGreen& green) {
  check_kernel(params, K, u);
  if (green.kernel().grid() != u.grid)
    throw std::invalid_argument("residual_critical: green grid mismatch");
  const double uc = upper_critical(params.N, params.alpha, params.mu);
  const double d = double_integral_D(u, uc, params.alpha, K);
  if (d <= 0) throw std::invalid_argument("residual_critical: zero profile");

  // Normalize the Lagrange multiplier to one: v = Q^{1/(2 uc - 2)} * u/D^{1/(2 uc)}.
  RadialFunction v = u;
  const double unit = std::pow(d, 1 / (2 * uc));
  for (double& x : v.values) x /= unit;
  const double q = kinetic_energy(v);
  const double lambda = std::pow(q, 1 / (2 * uc - 2));
  for (double& x : v.values) x *= lambda;

  const auto& g = *u.grid;
  const double omega = sphere_area(g.dimension());
  const auto st = derivative_stencil(g);
  auto dv = apply_stencil(st, v.values);
  for (std::size_t i = 0; i < dv.size(); ++i) dv[i] *= g.weight(i);
  auto cov = apply_stencil_transpose(st, dv);  // S^T (w .* S v)
  const auto w = weighted_potential(v, uc, params.alpha, K);
  for (std::size_t i = 0; i < cov.size(); ++i) {
    const double vi = v.values[i];
    const double nonlinear = std::pow(g.node(i), -params.alpha) * w.values[i] *
                             std::copysign(std::pow(std::abs(vi), uc - 1), vi);
    cov[i] = omega * (cov[i] - g.weight(i) * nonlinear);
  }

  Residual res;
  res.pointwise = covector_to_pointwise(u.grid, cov);
  auto masked = mask_boundary(cov);
  // D^{-1,2} dual norm through the Green kernel: cov^T (c_N/omega) K cov.
  const auto k_cov = green.kernel().apply(masked);
  double dual_sq = 0;
  for (std::size_t i = 0; i < masked.size(); ++i)
    dual_sq += masked[i] * k_cov[i];
  dual_sq *= green.green_constant() / omega;
  res.weak_norm = std::sqrt(std::max(dual_sq, 0.0)) /
                  std::sqrt(std::max(kinetic_energy(v), kTiny));
  return res;
}

double pohozaev_residual(const RadialFunction& u, const ProblemParams& params,
                         const KernelMatrix& K) {
  check_kernel(params, K, u);
  if (!params.p)
    throw std::invalid_argument("pohozaev_residual requires params.p");
  const double p = *params.p;
  const int N = params.N;
  const double lhs = (N - 2) / 2.0 * kinetic_energy(u) +
                     N / 2.0 * mass_integral(u);
  const double c = (2 * N - 2 * params.alpha - params.mu) / (2 * p);
  const double rhs = c * double_integral_D(u, p, params.alpha, K);
  return (lhs - rhs) / std::max(std::abs(lhs), kTiny);
}

NonexistenceReport nonexistence_demo(const ProblemParams& params) {
  if (!params.p)
    throw std::invalid_argument("nonexistence_demo requires params.p");
  if (existence_verdict(params) != Existence::NonexistenceByPohozaev)
    throw std::invalid_argument(
        "nonexistence_demo: parameters lie in the existence range");
  const int N = params.N;
  const double c = (2 * N - 2 * params.alpha - params.mu) / (2 * *params.p);
  NonexistenceReport rep;
  rep.kinetic_coeff = (N - 2) / 2.0 - c;
  rep.mass_coeff = N / 2.0 - c;
  rep.forces_zero = (rep.kinetic_coeff >= 0 && rep.mass_coeff >= 0) ||
                    (rep.kinetic_coeff <= 0 && rep.mass_coeff <= 0);
  return rep;
}

struct H1Metric::Impl {
  GridPtr grid;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

H1Metric::H1Metric(GridPtr grid) : impl_(new Impl) {
  impl_->grid = std::move(grid);
  const auto& g = *impl_->grid;
  const std::size_t n = g.size();
  const double omega = sphere_area(g.dimension());
  const auto st = derivative_stencil(g);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = st.start[i];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        trip.emplace_back(int(j + a), int(j + b),
                          omega * g.weight(i) * st.coeff[i][a] * st.coeff[i][b]);
    trip.emplace_back(int(i), int(i), omega * g.weight(i));
  }
  const auto dim = Eigen::Index(n);
  Eigen::SparseMatrix<double> G(dim, dim);
  G.setFromTriplets(trip.begin(), trip.end());
  impl_->ldlt.compute(G);
  if (impl_->ldlt.info() != Eigen::Success)
    throw std::runtime_error("H1Metric: factorization failed");
}

H1Metric::~H1Metric() = default;
H1Metric::H1Metric(H1Metric&&) noexcept = default;

const GridPtr& H1Metric::grid() const { return impl_->grid; }

std::vector<double> H1Metric::solve_covector(
    const std::vector<double>& cov) const {
  const Eigen::Map<const Eigen::VectorXd> b(cov.data(),
                                            Eigen::Index(cov.size()));
  Eigen::VectorXd x = impl_->ldlt.solve(b);
  return {x.data(), x.data() + x.size()};
}

double H1Metric::dual_norm_sq(const std::vector<double>& cov) const {
  const auto x = solve_covector(cov);
  double sum = 0;
  for (std::size_t i = 0; i < cov.size(); ++i) sum += cov[i] * x[i];
  return sum;
}

}  // namespace choquard
