#pragma once

#include <functional>
#include <vector>

namespace choquard::quad {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Jacobi rule for int_{-1}^{1} (1-t^2)^a g(t) dt, computed by
/// Golub-Welsch on the symmetric Jacobi recurrence. Rules are cached per
/// (a, n); a must be a non-negative integer multiple of 1/2.
const GaussRule& gauss_jacobi(double a, int n);

/// Adaptive endpoint-tolerant quadrature of g over the finite interval
/// [lo, hi] (tanh-sinh); handles integrable endpoint singularities.
double integrate_singular(const std::function<double(double)>& g, double lo,
                          double hi, double rel_tol = 1e-12);

}  // namespace choquard::quad
