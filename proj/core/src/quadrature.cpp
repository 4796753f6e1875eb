#include "choquard/quadrature.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace choquard::quad {

namespace {

GaussRule build_gauss_jacobi(double a, int n) {
  // Symmetric Jacobi weight (1-t^2)^a: zero recurrence diagonal,
  // beta_k = k(k+2a) / ((2k+2a+1)(2k+2a-1)), mu_0 = sqrt(pi) G(a+1)/G(a+3/2).
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  std::vector<double> b(n);  // b[k] = sqrt(beta_k), k >= 1
  for (int k = 1; k < n; ++k) {
    const double beta =
        k * (k + 2 * a) / ((2 * k + 2 * a + 1) * (2 * k + 2 * a - 1));
    b[k] = std::sqrt(beta);
    sub[k - 1] = b[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("gauss_jacobi: eigensolver failed");
  const double mu0 =
      std::sqrt(M_PI) * std::tgamma(a + 1) / std::tgamma(a + 1.5);

  // Weights through the Christoffel function: w_i = 1 / sum_k p_k(x_i)^2
  // with the orthonormal recurrence p_0 = 1/sqrt(mu0),
  // p_{k+1} = (x p_k - b_k p_{k-1}) / b_{k+1}.
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = solver.eigenvalues()[i];
    double pm = 0.0;
    double pk = 1.0 / std::sqrt(mu0);
    double sum = pk * pk;
    for (int k = 0; k + 1 < n; ++k) {
      const double pn = (x * pk - (k > 0 ? b[k] * pm : 0.0)) / b[k + 1];
      pm = pk;
      pk = pn;
      sum += pk * pk;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / sum;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_jacobi(double a, int n) {
  const long key_a = std::lround(2 * a);
  if (key_a < 0 || std::abs(2 * a - double(key_a)) > 1e-12)
    throw std::invalid_argument("gauss_jacobi: a must be a half-integer >= 0");
  static std::map<std::pair<long, int>, GaussRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] = cache.try_emplace({key_a, n});
  if (inserted) it->second = build_gauss_jacobi(a, n);
  return it->second;
}

double integrate_singular(const std::function<double(double)>& g, double lo,
                          double hi, double rel_tol) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(g, lo, hi, rel_tol);
}

}  // namespace choquard::quad
