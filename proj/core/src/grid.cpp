#include "choquard/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace choquard {

double sphere_area(int N) {
  if (N < 2) throw std::invalid_argument("sphere_area requires N >= 2");
  return 2.0 * std::pow(M_PI, N / 2.0) / std::tgamma(N / 2.0);
}

namespace {

// m_q = int_a^{a+1} xi^q e^{beta xi} d xi, q = 0..3. Power series for small
// beta (the closed form cancels catastrophically as beta -> 0).
std::array<double, 4> exp_moments(double beta, double a) {
  std::array<double, 4> m{};
  if (std::abs(beta) < 0.5) {
    for (int q = 0; q < 4; ++q) {
      double sum = 0.0;
      double coeff = 1.0;  // beta^k / k!
      for (int k = 0; k < 80; ++k) {
        const double term =
            coeff * (std::pow(a + 1, q + k + 1) - std::pow(a, q + k + 1)) /
            (q + k + 1);
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
        coeff *= beta / (k + 1);
      }
      m[q] = sum;
    }
    return m;
  }
  // Closed form: antiderivative of xi^q e^{beta xi}.
  auto anti = [beta](int q, double xi) {
    double sum = 0.0;
    double fact = 1.0;  // q!/(q-j)!
    double pw = std::pow(xi, q);
    for (int j = 0; j <= q; ++j) {
      sum += (j % 2 == 0 ? 1.0 : -1.0) * fact * pw / std::pow(beta, j + 1);
      if (j < q) {
        fact *= q - j;
        pw = std::pow(xi, q - j - 1);
      }
    }
    return std::exp(beta * xi) * sum;
  };
  for (int q = 0; q < 4; ++q) m[q] = anti(q, a + 1) - anti(q, a);
  return m;
}

// Coefficients c_k, k = 0..3, with sum_k c_k f(xi_k) = int_a^{a+1} P3 e^{beta xi},
// xi_k = k, P3 the cubic through the stencil values (moment matching).
std::array<double, 4> cell_coefficients(double beta, double a) {
  const auto m = exp_moments(beta, a);
  // Solve the 4x4 Vandermonde system sum_k c_k k^q = m_q by elimination on
  // the Newton basis at nodes {0,1,2,3}.
  // Divided-difference approach: represent the rule exactly via the inverse
  // Vandermonde of nodes 0,1,2,3 (integer nodes, closed form).
  // V^{-1} rows derived from Lagrange polynomials:
  //   l_0(x) = (x-1)(x-2)(x-3)/(-6) = (-x^3 + 6x^2 - 11x + 6)/6
  //   l_1(x) = x(x-2)(x-3)/2       = (x^3 - 5x^2 + 6x)/2
  //   l_2(x) = x(x-1)(x-3)/(-2)    = (-x^3 + 4x^2 - 3x)/2
  //   l_3(x) = x(x-1)(x-2)/6       = (x^3 - 3x^2 + 2x)/6
  // c_k = int l_k = sum_q coeff(l_k, q) * m_q.
  const double c0 = (6 * m[0] - 11 * m[1] + 6 * m[2] - m[3]) / 6.0;
  const double c1 = (6 * m[1] - 5 * m[2] + m[3]) / 2.0;
  const double c2 = (-3 * m[1] + 4 * m[2] - m[3]) / 2.0;
  const double c3 = (2 * m[1] - 3 * m[2] + m[3]) / 6.0;
  return {c0, c1, c2, c3};
}

}  // namespace

RadialGrid::RadialGrid(int N, double r_min, double r_max, std::size_t n)
    : dim_(N) {
  if (N < 2) throw std::invalid_argument("RadialGrid: N >= 2 required");
  if (!(r_min > 0) || !(r_max > r_min))
    throw std::invalid_argument("RadialGrid: need 0 < r_min < r_max");
  if (n < 4) throw std::invalid_argument("RadialGrid: need n >= 4");

  const double lx = std::log(r_min);
  log_step_ = (std::log(r_max) - lx) / double(n - 1);
  nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) nodes_[i] = std::exp(lx + double(i) * log_step_);
  nodes_.front() = r_min;
  nodes_.back() = r_max;

  // Quadrature weights: per cell [x_i, x_{i+1}], integrate the cubic through
  // the 4-node stencil against e^{N x} dx.
  weights_.assign(n, 0.0);
  const double beta = N * log_step_;
  const auto c_left = cell_coefficients(beta, 0.0);
  const auto c_mid = cell_coefficients(beta, 1.0);
  const auto c_right = cell_coefficients(beta, 2.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t s;
    const std::array<double, 4>* c;
    if (i == 0) {
      s = 0;
      c = &c_left;
    } else if (i == n - 2) {
      s = n - 4;
      c = &c_right;
    } else {
      s = i - 1;
      c = &c_mid;
    }
    const double scale = log_step_ * std::exp(double(N) * (lx + double(s) * log_step_));
    for (int k = 0; k < 4; ++k) weights_[s + k] += scale * (*c)[k];
  }
  for (double w : weights_)
    if (!(w > 0)) throw std::logic_error("RadialGrid: nonpositive weight");
}

std::shared_ptr<const RadialGrid> RadialGrid::make(int N, double r_min,
                                                   double r_max,
                                                   std::size_t n) {
  return std::shared_ptr<const RadialGrid>(new RadialGrid(N, r_min, r_max, n));
}

double RadialGrid::ratio() const { return std::exp(log_step_); }

std::size_t RadialGrid::index_near(double r) const {
  if (!(r > 0)) throw std::invalid_argument("index_near: r > 0 required");
  const double x = (std::log(r) - std::log(nodes_.front())) / log_step_;
  const auto i = std::llround(x);
  return std::size_t(std::clamp<long long>(i, 0, (long long)nodes_.size() - 1));
}

void require_same_grid(const RadialFunction& f, const RadialFunction& g) {
  if (f.grid != g.grid)
    throw std::invalid_argument("radial functions live on different grids");
}

namespace {

// Contribution of the origin cell [0, r_min): extrapolate f ~ f_0 (r/r_0)^s
// from the first two nodes and integrate against r^{N-1} dr.
double origin_cell(const RadialFunction& f) {
  const auto& grid = *f.grid;
  const int N = grid.dimension();
  const double f0 = f.values[0];
  const double f1 = f.values[1];
  if (f0 == 0.0) return 0.0;
  double slope = 0.0;
  if (f0 > 0.0 && f1 > 0.0)
    slope = std::log(f1 / f0) / grid.log_step();
  else if (f0 < 0.0 && f1 < 0.0)
    slope = std::log(f1 / f0) / grid.log_step();
  const int N_min = -N;  // integrability floor for r^{N-1+s}
  slope = std::clamp(slope, double(N_min) + 0.5, 50.0);
  return f0 * std::pow(grid.r_min(), N) / (N + slope);
}

}  // namespace

double integrate(const RadialFunction& f) {
  const auto& grid = *f.grid;
  const auto& w = grid.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * f.values[i];
  sum += origin_cell(f);
  return sphere_area(grid.dimension()) * sum;
}

namespace {

struct Stencil3 {
  std::size_t j0;  // leftmost node index
  double c[3];
};

// First-derivative weights of the quadratic through (ra, rb, rc) at re.
Stencil3 d1_stencil(const RadialGrid& g, std::size_t j0, std::size_t e) {
  const double a = g.node(j0), b = g.node(j0 + 1), c = g.node(j0 + 2);
  const double x = g.node(e);
  Stencil3 s{j0, {0, 0, 0}};
  s.c[0] = (2 * x - b - c) / ((a - b) * (a - c));
  s.c[1] = (2 * x - a - c) / ((b - a) * (b - c));
  s.c[2] = (2 * x - a - b) / ((c - a) * (c - b));
  return s;
}

std::size_t stencil_start(std::size_t i, std::size_t n) {
  if (i == 0) return 0;
  if (i == n - 1) return n - 3;
  return i - 1;
}

// Fornberg finite-difference weights for derivatives up to order m at x0
// on arbitrary nodes a[0..n-1]; out[j*(m+1)+k] is the weight of node j for
// the k-th derivative.
void fornberg_weights(const double* a, std::size_t n, int m, double x0,
                      double* out) {
  std::vector<double> C(n * (m + 1), 0.0);
  C[0] = 1.0;
  double c1 = 1.0;
  double c4 = a[0] - x0;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = int(std::min<std::size_t>(i, m));
    double c2 = 1.0;
    const double c5 = c4;
    c4 = a[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = a[i] - a[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          C[i * (m + 1) + k] =
              c1 * (k * C[(i - 1) * (m + 1) + k - 1] -
                    c5 * C[(i - 1) * (m + 1) + k]) /
              c2;
        C[i * (m + 1)] = -c1 * c5 * C[(i - 1) * (m + 1)] / c2;
      }
      for (int k = mn; k >= 1; --k)
        C[j * (m + 1) + k] =
            (c4 * C[j * (m + 1) + k] - k * C[j * (m + 1) + k - 1]) / c3;
      C[j * (m + 1)] = c4 * C[j * (m + 1)] / c3;
    }
    c1 = c2;
  }
  std::copy(C.begin(), C.end(), out);
}

}  // namespace

DerivativeStencil derivative_stencil(const RadialGrid& g) {
  const std::size_t n = g.size();
  if (n < 3) throw std::invalid_argument("derivative_stencil: n >= 3 required");
  DerivativeStencil st;
  st.start.resize(n);
  st.coeff.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = d1_stencil(g, stencil_start(i, n), i);
    st.start[i] = s.j0;
    st.coeff[i] = {s.c[0], s.c[1], s.c[2]};
  }
  return st;
}

RadialFunction radial_derivative(const RadialFunction& f) {
  const auto& g = *f.grid;
  const std::size_t n = g.size();
  if (n < 3) throw std::invalid_argument("radial_derivative: n >= 3 required");
  RadialFunction out(f.grid);
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = d1_stencil(g, stencil_start(i, n), i);
    out.values[i] = s.c[0] * f.values[s.j0] + s.c[1] * f.values[s.j0 + 1] +
                    s.c[2] * f.values[s.j0 + 2];
  }
  return out;
}

RadialFunction radial_laplacian(const RadialFunction& f) {
  const auto& g = *f.grid;
  const std::size_t n = g.size();
  if (n < 3) throw std::invalid_argument("radial_laplacian: n >= 3 required");
  const double nm1 = g.dimension() - 1;
  // 5-point Fornberg stencils (4th order on the smoothly graded nodes);
  // shrinks to 3 points on very small grids.
  const std::size_t width = std::min<std::size_t>(5, n);
  RadialFunction out(f.grid);
  std::vector<double> w(width * 3);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j0 = (i >= width / 2) ? i - width / 2 : 0;
    j0 = std::min(j0, n - width);
    fornberg_weights(g.nodes().data() + j0, width, 2, g.node(i), w.data());
    const double inv_r = nm1 / g.node(i);
    double v = 0.0;
    for (std::size_t k = 0; k < width; ++k)
      v += (w[k * 3 + 2] + inv_r * w[k * 3 + 1]) * f.values[j0 + k];
    out.values[i] = v;
  }
  return out;
}

double dirichlet_norm_sq(const RadialFunction& f) {
  RadialFunction df = radial_derivative(f);
  for (double& v : df.values) v *= v;
  return integrate(df);
}

double h1_norm_sq(const RadialFunction& f) {
  RadialFunction f2(f.grid, f.values);
  for (double& v : f2.values) v *= v;
  return dirichlet_norm_sq(f) + integrate(f2);
}

RadialFunction dilate_grid_exact(const RadialFunction& u, int k) {
  const auto& g = *u.grid;
  const long long n = (long long)g.size();
  const double scale =
      std::exp(double(k) * g.log_step() * (g.dimension() - 2) / 2.0);
  RadialFunction out(u.grid);
  for (long long i = 0; i < n; ++i) {
    const long long j = i + k;
    out.values[std::size_t(i)] =
        (j >= 0 && j < n) ? scale * u.values[std::size_t(j)] : 0.0;
  }
  return out;
}

void write_csv(const RadialFunction& f, std::ostream& out) {
  out << "r,u\n";
  char line[80];
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", f.grid->node(i),
                  f.values[i]);
    out << line;
  }
}

RadialFunction read_csv(std::istream& in, GridPtr grid) {
  std::string line;
  if (!std::getline(in, line) || (line != "r,u" && line != "r,u\r"))
    throw std::runtime_error("profile CSV: missing 'r,u' header");
  RadialFunction f(std::move(grid));
  std::size_t i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (i >= f.size()) throw std::runtime_error("profile CSV: too many rows");
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("profile CSV: malformed row");
    double r, u;
    try {
      r = std::stod(line.substr(0, comma));
      u = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw std::runtime_error("profile CSV: malformed row");
    }
    const double rg = f.grid->node(i);
    if (std::abs(r - rg) > 1e-12 * std::max(std::abs(rg), 1.0))
      throw std::runtime_error("profile CSV: node mismatch with grid");
    f.values[i++] = u;
  }
  if (i != f.size()) throw std::runtime_error("profile CSV: truncated");
  return f;
}

}  // namespace choquard
