#pragma once

#include <Eigen/Dense>
#include <memory>

#include "choquard/grid.hpp"

namespace choquard {

/// Spherical average of |x-y|^{-mu} over directions at |x| = r, |y| = s:
///   k(r,s) = omega_{N-2} int_0^pi sin^{N-2}(th) (r^2+s^2-2rs cos th)^{-mu/2} dth,
/// evaluated by Gauss-Jacobi quadrature in t = cos(th) with node doubling.
/// For r == s the average is finite only for mu < N-1 (closed Beta form);
/// otherwise +infinity is returned. Throws std::domain_error for mu >= N or
/// nonpositive radii.
double angular_kernel(int N, double mu, double r, double s);

/// Dense angular-averaged kernel matrix k[i][j] = angular_kernel(N, mu, r_i, r_j)
/// on a log-uniform grid. Entries are assembled per log offset d = |i-j|
/// using the homogeneity k(c r, c s) = c^{-mu} k(r, s), which makes the
/// matrix exactly symmetric and exactly covariant under grid-ratio dilations.
/// Diagonal entries carry the cell average of the kernel over the local
/// quadrature cell (the pointwise value is singular or unrepresentative).
class KernelMatrix {
 public:
  KernelMatrix(int N, double mu, GridPtr grid);

  int dimension() const { return dim_; }
  double mu() const { return mu_; }
  const GridPtr& grid() const { return grid_; }
  const Eigen::MatrixXd& matrix() const { return k_; }
  double operator()(std::size_t i, std::size_t j) const { return k_(i, j); }

  /// y_i = sum_j k(i,j) g_j.
  std::vector<double> apply(const std::vector<double>& g) const;

 private:
  int dim_;
  double mu_;
  GridPtr grid_;
  Eigen::MatrixXd k_;
};

KernelMatrix assemble_kernel(int N, double mu, GridPtr grid);

/// Inner weighted potential w(r) = int_0^inf k_mu(r,s) |u(s)|^p s^{N-1-alpha} ds,
/// the radial form of int |u(y)|^p / (|x-y|^mu |y|^alpha) dy. The outer
/// |x|^{-alpha} weight is applied by the energy module.
RadialFunction weighted_potential(const RadialFunction& u, double p,
                                  double alpha, const KernelMatrix& K);

/// Convolution with the Green kernel of -Delta:
///   (G f)(x) = c_N int f(y) |x-y|^{-(N-2)} dy, c_N = 1/((N-2) omega_{N-1}),
/// realized through the angular kernel matrix at exponent mu = N-2.
/// bare = true drops the c_N normalization.
class RieszGreen {
 public:
  RieszGreen(int N, GridPtr grid);

  RadialFunction apply(const RadialFunction& f, bool bare = false) const;
  const KernelMatrix& kernel() const { return kernel_; }
  double green_constant() const { return c_n_; }

 private:
  KernelMatrix kernel_;
  double c_n_;
};

/// Tridiagonal finite-difference solver for (I - Delta) u = f on the radial
/// grid, with u'(r_min) = 0 (regularity at the origin) and an exponential
/// decay Robin condition at r_max.
class HelmholtzSolver {
 public:
  HelmholtzSolver(int N, GridPtr grid);

  RadialFunction solve(const RadialFunction& f) const;
  const GridPtr& grid() const { return grid_; }

 private:
  GridPtr grid_;
  std::vector<double> lower_, diag_, upper_;
};

/// Bessel kernel of (I - Delta)^{-tau/2} via the subordination integral
///   g_tau(r) = (4 pi)^{-tau/2} / Gamma(tau/2)
///              int_0^inf exp(-pi r^2/t - t/(4 pi)) t^{(tau-N)/2 - 1} dt,
/// evaluated by doubling trapezoid quadrature in log t. In three dimensions
/// g_2(r) = e^{-r}/(4 pi r).
double bessel_kernel(int N, double tau, double r);

}  // namespace choquard
