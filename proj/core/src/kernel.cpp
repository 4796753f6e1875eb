#include "choquard/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "choquard/parallel.hpp"
#include "choquard/quadrature.hpp"

namespace choquard {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_kernel_args(int N, double mu) {
  if (N < 3) throw std::domain_error("angular kernel: N >= 3 required");
  if (!(mu > 0 && mu < N))
    throw std::domain_error("angular kernel: 0 < mu < N required");
}

// k(1, sigma) through the substitution v = t* - t that moves the
// (near-)singular point t* = (1+sigma^2)/(2 sigma) to the integration
// endpoint, where tanh-sinh absorbs it. Used for the diagonal cell average
// and for radius pairs too close for the Gauss ladder.
double angular_near_diagonal(int N, double mu, double sigma) {
  const double t_star = (1 + sigma * sigma) / (2 * sigma);
  const double delta = t_star - 1;
  const double a = (N - 3) / 2.0;
  auto f = [&](double v) {
    const double t = t_star - v;
    const double one_minus_t_sq = std::max(0.0, 1 - t * t);
    return std::pow(one_minus_t_sq, a) * std::pow(2 * sigma * v, -mu / 2);
  };
  return sphere_area(N - 1) *
         quad::integrate_singular(f, delta, t_star + 1, 1e-12);
}

// Gauss-Jacobi evaluation of the angular average at radii (r, s), r != s.
// Convergence of the node-doubling ladder degrades as s/r -> 1 (the
// integrand's singularity approaches t = 1), so nearly equal radii are
// rerouted to the endpoint-shifted form.
double angular_by_quadrature(int N, double mu, double r, double s) {
  const double sigma = s > r ? s / r : r / s;
  const double scale = std::pow(std::min(r, s), -mu);
  if (sigma - 1 < 0.02) return scale * angular_near_diagonal(N, mu, sigma);
  const double a = (N - 3) / 2.0;
  const double omega = sphere_area(N - 1);
  double prev = 0.0;
  for (int n = 64; n <= 2048; n *= 2) {
    const auto& rule = quad::gauss_jacobi(a, n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double q = 1 + sigma * sigma - 2 * sigma * rule.nodes[i];
      sum += rule.weights[i] * std::pow(q, -mu / 2);
    }
    const double val = scale * omega * sum;
    if (n > 64 && std::abs(val - prev) <= 1e-12 * std::abs(val)) return val;
    prev = val;
  }
  return prev;
}

// Cell-average constant for diagonal entries: relative to the pointwise
// kernel at radius r the diagonal carries r^{-mu} * kappa with
//   kappa = int_J k(1, s) s^{N-1} ds / int_J s^{N-1} ds
// over the geometric cell J around 1 (halved at the grid boundary).
// The double integral is evaluated in the squared-distance variable
// q = 1 + sigma^2 - 2 sigma t, which moves the kernel singularity to the
// integrable endpoint q -> 0:
//   num = omega_{N-2} 2^{2-N} int q^{-mu/2} S(q) dq,
//   S(q) = int_{sigma in J, |sigma-1| <= sqrt q <= sigma+1}
//            sigma ((q - (sigma-1)^2)((sigma+1)^2 - q))^{(N-3)/2} dsigma.
double diagonal_average(int N, double mu, double lo, double hi) {
  const double a = (N - 3) / 2.0;
  const auto& tau_rule = quad::gauss_jacobi(a, 32);    // weight (1-tau^2)^a
  const auto& leg_rule = quad::gauss_jacobi(0.0, 64);  // plain Legendre

  // sigma-slice at fixed q over [s0, s1] = J cut by |sigma-1| <= sqrt q
  // and sqrt q <= sigma + 1.
  auto slice = [&](double q) {
    const double rq = std::sqrt(q);
    const double s0 = std::max({lo, 1 - rq, rq - 1});
    const double s1 = std::min(hi, 1 + rq);
    if (!(s1 > s0)) return 0.0;
    if (1 - rq >= lo && 1 + rq <= hi) {
      // Full interval: sigma = 1 + sqrt(q) tau makes the edge factor the
      // Gauss-Jacobi weight exactly.
      double sum = 0;
      for (std::size_t i = 0; i < tau_rule.nodes.size(); ++i) {
        const double s = 1 + rq * tau_rule.nodes[i];
        sum += tau_rule.weights[i] * s *
               std::pow((s + 1) * (s + 1) - q, a);
      }
      return std::pow(q, a) * rq * sum;
    }
    double sum = 0;
    const double mid = (s0 + s1) / 2, half = (s1 - s0) / 2;
    for (std::size_t i = 0; i < leg_rule.nodes.size(); ++i) {
      const double s = mid + half * leg_rule.nodes[i];
      const double val =
          std::max(0.0, (q - (s - 1) * (s - 1)) * ((s + 1) * (s + 1) - q));
      sum += leg_rule.weights[i] * s * std::pow(val, a);
    }
    return half * sum;
  };
  auto outer = [&](double q) {
    const double s = slice(q);
    return s == 0 ? 0.0 : std::pow(q, -mu / 2) * s;
  };

  // Piece boundaries where the slice changes shape (kinks).
  const double qmax = (1 + hi) * (1 + hi);
  double cuts[5] = {0.0, (hi - 1) * (hi - 1), (1 - lo) * (1 - lo),
                    (1 + lo) * (1 + lo), qmax};
  std::sort(cuts, cuts + 5);
  double num = 0;
  for (int piece = 0; piece + 1 < 5; ++piece) {
    const double q0 = std::min(cuts[piece], qmax);
    const double q1 = std::min(cuts[piece + 1], qmax);
    if (!(q1 > q0)) continue;
    num += quad::integrate_singular(outer, q0, q1, 1e-10);
  }
  num *= sphere_area(N - 1) * std::pow(2.0, 2 - N);
  const double den = (std::pow(hi, N) - std::pow(lo, N)) / N;
  return num / den;
}

}  // namespace

double angular_kernel(int N, double mu, double r, double s) {
  check_kernel_args(N, mu);
  if (!(r > 0 && s > 0))
    throw std::domain_error("angular kernel: radii must be positive");
  if (r == s) {
    if (mu >= N - 1) return kInf;
    // int_{-1}^{1} (1-t)^{(N-3-mu)/2} (1+t)^{(N-3)/2} dt in closed Beta form.
    const double beta = std::tgamma((N - 1 - mu) / 2) *
                        std::tgamma((N - 1) / 2.0) /
                        std::tgamma(N - 1 - mu / 2);
    return sphere_area(N - 1) * std::pow(2 * r * r, -mu / 2) *
           std::pow(2.0, N - 2 - mu / 2) * beta;
  }
  return angular_by_quadrature(N, mu, r, s);
}

KernelMatrix::KernelMatrix(int N, double mu, GridPtr grid)
    : dim_(N), mu_(mu), grid_(std::move(grid)) {
  check_kernel_args(N, mu);
  if (grid_->dimension() != N)
    throw std::invalid_argument("KernelMatrix: grid dimension mismatch");
  const std::size_t n = grid_->size();
  const double rho = grid_->ratio();

  // One angular evaluation per log offset; k(r_i, r_j) = r_min(i,j)^{-mu} F_d.
  std::vector<double> offset(n);
  parallel_for(n, [&](std::size_t d) {
    if (d == 0) return;
    offset[d] =
        angular_by_quadrature(N, mu, 1.0, std::exp(double(d) * grid_->log_step()));
  });
  const double half = std::sqrt(rho);
  const double diag_interior = diagonal_average(N, mu, 1 / half, half);
  const double diag_left = diagonal_average(N, mu, 1.0, half);
  const double diag_right = diagonal_average(N, mu, 1 / half, 1.0);

  k_.resize(Eigen::Index(n), Eigen::Index(n));
  const auto& r = grid_->nodes();
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = std::pow(r[i], -mu);
    double diag = diag_interior;
    if (i == 0) diag = diag_left;
    if (i == n - 1) diag = diag_right;
    k_(Eigen::Index(i), Eigen::Index(i)) = scale * diag;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = scale * offset[j - i];
      k_(Eigen::Index(i), Eigen::Index(j)) = v;
      k_(Eigen::Index(j), Eigen::Index(i)) = v;
    }
  }
}

std::vector<double> KernelMatrix::apply(const std::vector<double>& g) const {
  if (g.size() != grid_->size())
    throw std::invalid_argument("KernelMatrix::apply: size mismatch");
  const Eigen::Map<const Eigen::VectorXd> gv(g.data(), Eigen::Index(g.size()));
  Eigen::VectorXd y = k_ * gv;
  return {y.data(), y.data() + y.size()};
}

KernelMatrix assemble_kernel(int N, double mu, GridPtr grid) {
  return KernelMatrix(N, mu, std::move(grid));
}

RadialFunction weighted_potential(const RadialFunction& u, double p,
                                  double alpha, const KernelMatrix& K) {
  if (u.grid != K.grid())
    throw std::invalid_argument("weighted_potential: grid mismatch");
  const auto& grid = *u.grid;
  const std::size_t n = grid.size();
  std::vector<double> density(n);
  for (std::size_t i = 0; i < n; ++i)
    density[i] = grid.weight(i) * std::pow(std::abs(u.values[i]), p) *
                 std::pow(grid.node(i), -alpha);
  return {u.grid, K.apply(density)};
}

RieszGreen::RieszGreen(int N, GridPtr grid)
    : kernel_(N, N - 2.0, std::move(grid)),
      c_n_(1.0 / ((N - 2) * sphere_area(N))) {}

RadialFunction RieszGreen::apply(const RadialFunction& f, bool bare) const {
  if (f.grid != kernel_.grid())
    throw std::invalid_argument("RieszGreen::apply: grid mismatch");
  const auto& grid = *f.grid;
  const std::size_t n = grid.size();
  for (double v : f.values)
    if (!std::isfinite(v))
      throw std::runtime_error("RieszGreen::apply: divergent integrand");
  std::vector<double> density(n);
  for (std::size_t i = 0; i < n; ++i)
    density[i] = grid.weight(i) * f.values[i];
  auto y = kernel_.apply(density);
  const double scale = bare ? 1.0 : c_n_;
  for (double& v : y) v *= scale;
  return {f.grid, std::move(y)};
}

HelmholtzSolver::HelmholtzSolver(int N, GridPtr grid) : grid_(std::move(grid)) {
  if (grid_->dimension() != N)
    throw std::invalid_argument("HelmholtzSolver: grid dimension mismatch");
  const std::size_t n = grid_->size();
  if (n < 4) throw std::invalid_argument("HelmholtzSolver: n >= 4 required");
  lower_.assign(n, 0.0);
  diag_.assign(n, 0.0);
  upper_.assign(n, 0.0);
  const auto& r = grid_->nodes();

  // Row 0: regularity condition u'(r_min) = 0 as u_0 = u_1.
  diag_[0] = 1.0;
  upper_[0] = -1.0;
  // Rows 1..n-2: u_i - u''_i - (N-1)/r_i u'_i = f_i on the uneven 3-point
  // stencil.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = r[i] - r[i - 1];
    const double hp = r[i + 1] - r[i];
    const double d2a = 2 / (hm * (hm + hp));
    const double d2b = -2 / (hm * hp);
    const double d2c = 2 / (hp * (hm + hp));
    const double d1a = -hp / (hm * (hm + hp));
    const double d1b = (hp - hm) / (hm * hp);
    const double d1c = hm / (hp * (hm + hp));
    const double w = (N - 1) / r[i];
    lower_[i] = -(d2a + w * d1a);
    diag_[i] = 1.0 - (d2b + w * d1b);
    upper_[i] = -(d2c + w * d1c);
  }
  // Row n-1: Robin decay u' + (1 + (N-1)/(2 r)) u = 0.
  const double h = r[n - 1] - r[n - 2];
  lower_[n - 1] = -1.0 / h;
  diag_[n - 1] = 1.0 / h + 1.0 + (N - 1) / (2 * r[n - 1]);
}

RadialFunction HelmholtzSolver::solve(const RadialFunction& f) const {
  if (f.grid != grid_)
    throw std::invalid_argument("HelmholtzSolver::solve: grid mismatch");
  const std::size_t n = grid_->size();
  std::vector<double> c(n), d(n);
  // Thomas elimination; the operator is irreducibly diagonally dominant.
  double den = diag_[0];
  if (den == 0) throw std::runtime_error("HelmholtzSolver: singular system");
  c[0] = upper_[0] / den;
  d[0] = 0.0;  // row 0 RHS is the boundary condition
  for (std::size_t i = 1; i < n; ++i) {
    const double rhs = (i + 1 < n) ? f.values[i] : 0.0;
    den = diag_[i] - lower_[i] * c[i - 1];
    if (den == 0) throw std::runtime_error("HelmholtzSolver: singular system");
    c[i] = (i + 1 < n) ? upper_[i] / den : 0.0;
    d[i] = (rhs - lower_[i] * d[i - 1]) / den;
  }
  RadialFunction u(f.grid);
  u.values[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    u.values[i] = d[i] - c[i] * u.values[i + 1];
  return u;
}

double bessel_kernel(int N, double tau, double r) {
  if (N < 1) throw std::domain_error("bessel_kernel: N >= 1 required");
  if (!(tau > 0)) throw std::domain_error("bessel_kernel: tau > 0 required");
  if (!(r > 0)) throw std::domain_error("bessel_kernel: r > 0 required");

  // Integrand in x = log t: exp(phi(x)),
  // phi(x) = -pi r^2 e^{-x} - e^x/(4 pi) + (tau - N)/2 * x.
  const double c = (tau - N) / 2.0;
  auto phi = [&](double x) {
    return -M_PI * r * r * std::exp(-x) - std::exp(x) / (4 * M_PI) + c * x;
  };
  // Peak by Newton on phi' = pi r^2 e^{-x} - e^x/(4 pi) + c.
  double x0 = std::log(2 * M_PI * r);
  for (int it = 0; it < 60; ++it) {
    const double e1 = M_PI * r * r * std::exp(-x0);
    const double e2 = std::exp(x0) / (4 * M_PI);
    const double g = e1 - e2 + c;
    const double dg = -e1 - e2;
    const double step = g / dg;
    x0 -= step;
    if (std::abs(step) < 1e-13) break;
  }
  const double peak = phi(x0);
  double lo = x0, hi = x0;
  while (phi(lo) > peak - 60) lo -= 1.0;
  while (phi(hi) > peak - 60) hi += 1.0;

  double prev = 0.0;
  double value = 0.0;
  bool converged = false;
  for (int n = 64; n <= 1 << 20; n *= 2) {
    const double h = (hi - lo) / n;
    double sum = 0.5 * (std::exp(phi(lo) - peak) + std::exp(phi(hi) - peak));
    for (int i = 1; i < n; ++i) sum += std::exp(phi(lo + i * h) - peak);
    value = sum * h * std::exp(peak);
    if (n > 64 && std::abs(value - prev) <= 1e-13 * std::abs(value)) {
      converged = true;
      break;
    }
    prev = value;
  }
  if (!converged)
    throw std::runtime_error("bessel_kernel: quadrature did not converge");
  return value * std::pow(4 * M_PI, -tau / 2) / std::tgamma(tau / 2);
}

}  // namespace choquard
