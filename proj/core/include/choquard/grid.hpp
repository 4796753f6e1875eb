#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <vector>

namespace choquard {

/// Area of the unit sphere S^{N-1} in R^N: omega_{N-1} = 2 pi^{N/2} / Gamma(N/2).
double sphere_area(int N);

/// Log-uniform radial grid r_i = r_min * rho^i, rho = (r_max/r_min)^{1/(n-1)},
/// with quadrature weights for int_{r_min}^{r_max} f(r) r^{N-1} dr.
///
/// The weights come from integrating the local cubic interpolant in log r
/// against the exact r^N d(log r) measure cell by cell, so the rule is exact
/// for cubics in log r (in particular for constants, which reproduces
/// (r_max^N - r_min^N)/N to roundoff). Interior weights are proportional to
/// r_i^N, which makes dilation by a grid ratio an exact index shift away from
/// the boundary.
class RadialGrid {
 public:
  static std::shared_ptr<const RadialGrid> make(int N, double r_min,
                                                double r_max, std::size_t n);

  int dimension() const { return dim_; }
  double r_min() const { return nodes_.front(); }
  double r_max() const { return nodes_.back(); }
  std::size_t size() const { return nodes_.size(); }
  double log_step() const { return log_step_; }
  /// Node ratio rho = r_{i+1}/r_i.
  double ratio() const;

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  /// Index of the node nearest to r (in log distance).
  std::size_t index_near(double r) const;

 private:
  RadialGrid(int N, double r_min, double r_max, std::size_t n);

  int dim_;
  double log_step_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Radial profile sampled on a grid.
struct RadialFunction {
  GridPtr grid;
  std::vector<double> values;

  RadialFunction() = default;
  explicit RadialFunction(GridPtr g) : grid(std::move(g)) {
    values.assign(grid->size(), 0.0);
  }
  RadialFunction(GridPtr g, std::vector<double> v)
      : grid(std::move(g)), values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Samples f(r) at the grid nodes.
template <class F>
RadialFunction sample(GridPtr grid, F&& f) {
  RadialFunction out(std::move(grid));
  const auto& r = out.grid->nodes();
  for (std::size_t i = 0; i < r.size(); ++i) out.values[i] = f(r[i]);
  return out;
}

/// Throws std::invalid_argument unless f and g share one grid object.
void require_same_grid(const RadialFunction& f, const RadialFunction& g);

/// omega_{N-1} * [sum_i w_i f_i + origin cell] approximating int_{R^N} f dx
/// for radial f. The cell [0, r_min) is estimated by extrapolating f as a
/// power law from the first two nodes.
double integrate(const RadialFunction& f);

/// 3-point first-derivative stencil: row i applies coeff[i][0..2] to nodes
/// start[i] .. start[i]+2 (centered in the interior, one-sided at the ends;
/// exact for quadratics in r).
struct DerivativeStencil {
  std::vector<std::size_t> start;
  std::vector<std::array<double, 3>> coeff;
};

DerivativeStencil derivative_stencil(const RadialGrid& grid);

/// Centered 3-point first derivative on the uneven node spacing (exact for
/// quadratics in r); one-sided at the endpoints.
RadialFunction radial_derivative(const RadialFunction& f);

/// f'' + (N-1) f'/r with the same stencils; one-sided at the endpoints.
RadialFunction radial_laplacian(const RadialFunction& f);

/// int |grad f|^2 dx = omega_{N-1} int (f')^2 r^{N-1} dr over [r_min, r_max].
double dirichlet_norm_sq(const RadialFunction& f);

/// dirichlet_norm_sq + omega_{N-1} int f^2 r^{N-1} dr.
double h1_norm_sq(const RadialFunction& f);

/// Grid-exact dilation u -> tau^{(N-2)/2} u(tau .) with tau = rho^k
/// (an index shift by k; vacated entries are zero-filled).
RadialFunction dilate_grid_exact(const RadialFunction& u, int k);

/// CSV serialization: header "r,u", one node per line, ascending r,
/// full-precision decimal floats.
void write_csv(const RadialFunction& f, std::ostream& out);

/// Parses the CSV produced by write_csv onto the given grid. Throws
/// std::runtime_error when the file is malformed or its nodes do not match
/// the grid (relative 1e-12 per node).
RadialFunction read_csv(std::istream& in, GridPtr grid);

}  // namespace choquard
