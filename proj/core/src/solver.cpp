#include "choquard/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "choquard/bubble.hpp"
#include "choquard/exponents.hpp"

namespace choquard {

namespace {

constexpr double kTiny = 1e-300;

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double unit_double(std::uint64_t bits) {
  return double(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

void check_config(const SolverConfig& cfg) {
  if (cfg.max_iter < 1 || !(cfg.tol > 0) || !(cfg.step > 0))
    throw std::invalid_argument("SolverConfig: max_iter >= 1, tol > 0, step > 0");
}

void take_abs(RadialFunction& u) {
  for (double& v : u.values) v = std::abs(v);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double rel_change(const RadialFunction& a, const RadialFunction& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    num += d * d;
    den += b.values[i] * b.values[i];
  }
  return std::sqrt(num / std::max(den, kTiny));
}

}  // namespace

RadialFunction make_init(GridPtr grid, InitPreset preset, std::uint64_t seed) {
  switch (preset) {
    case InitPreset::Gaussian:
      return sample(std::move(grid),
                    [](double r) { return std::exp(-r * r / 2); });
    case InitPreset::Bubble:
      return talenti_bubble_profile(std::move(grid), 1.0);
    case InitPreset::Random: {
      std::uint64_t state = seed;
      double a[3], s[3];
      for (int k = 0; k < 3; ++k) {
        a[k] = 0.3 + 0.7 * unit_double(splitmix64(state));
        s[k] = 0.5 + 1.5 * unit_double(splitmix64(state));
      }
      return sample(std::move(grid), [&](double r) {
        double v = 0;
        for (int k = 0; k < 3; ++k)
          v += a[k] * std::exp(-r * r / (2 * s[k] * s[k]));
        return v;
      });
    }
  }
  throw std::invalid_argument("make_init: unknown preset");
}

// ---------------------------------------------------------------------------
// Subcritical gradient flow

SolveResult solve_subcritical(const ProblemParams& params,
                              const KernelMatrix& K, const SolverConfig& cfg,
                              const RadialFunction& init) {
  check_config(cfg);
  require_valid(params);
  if (!params.p)
    throw std::invalid_argument("solve_subcritical requires params.p");
  if (existence_verdict(params) != Existence::Exists)
    throw std::invalid_argument(
        "solve_subcritical: p outside the existence range (Pohozaev "
        "nonexistence)");
  if (init.grid != K.grid())
    throw std::invalid_argument("solve_subcritical: init grid mismatch");

  SolveResult out;
  out.report.method = "gradient_flow";
  RadialFunction u = init;
  take_abs(u);
  u = nehari_project(u, params, K).projected;  // throws on zero input

  H1Metric metric(u.grid);
  double step = cfg.step;
  double energy = energy_subcritical(u, params, K).energy;
  bool converged = false;
  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    const auto grad = subcritical_gradient(u, params, K);
    const auto dir = metric.solve_covector(grad);
    const double norm_sq = kinetic_energy(u) + mass_integral(u);
    const double residual =
        std::sqrt(std::max(dot(grad, dir), 0.0)) / std::sqrt(norm_sq);
    if (residual < cfg.tol) {
      converged = true;
      break;
    }
    bool accepted = false;
    for (int cut = 0; cut < 60; ++cut) {
      RadialFunction cand = u;
      for (std::size_t i = 0; i < cand.size(); ++i)
        cand.values[i] -= step * dir[i];
      take_abs(cand);
      try {
        cand = nehari_project(cand, params, K).projected;
      } catch (const std::invalid_argument&) {
        step /= 2;
        continue;
      }
      const double cand_energy = energy_subcritical(cand, params, K).energy;
      if (cand_energy <= energy + 1e-12 * std::abs(energy)) {
        u = std::move(cand);
        energy = cand_energy;
        accepted = true;
        step = std::min(step * 1.5, cfg.step * 1e6);
        break;
      }
      step /= 2;
    }
    out.report.energy_history.push_back(energy);
    if (!accepted) break;  // stalled at the backtracking floor
  }

  out.report.converged = converged;
  out.report.iterations = iter;
  out.report.final_energy = energy_subcritical(u, params, K);
  const double r_max = u.grid->r_max();
  out.report.decay = fit_decay(u, r_max / 10, r_max);
  out.u = std::move(u);
  return out;
}

// ---------------------------------------------------------------------------
// Critical constrained descent

namespace {

// Rescales u to D(u) = 1.
void normalize_constraint(RadialFunction& u, double uc, double alpha,
                          const KernelMatrix& K) {
  const double d = double_integral_D(u, uc, alpha, K);
  if (!(d > 0))
    throw std::invalid_argument("critical solve: vanishing nonlocal term");
  const double scale = std::pow(d, 1 / (2 * uc));
  for (double& v : u.values) v /= scale;
}

}  // namespace

SolveResult solve_critical(const ProblemParams& params, const KernelMatrix& K,
                           const SolverConfig& cfg,
                           const RadialFunction& init) {
  check_config(cfg);
  if (!params.critical())
    throw std::invalid_argument("solve_critical: params must omit p");
  require_valid(params);
  if (init.grid != K.grid())
    throw std::invalid_argument("solve_critical: init grid mismatch");

  const double uc = upper_critical(params.N, params.alpha, params.mu);
  const auto grid = K.grid();
  const std::size_t n = grid->size();
  const RieszGreen green(params.N, grid);
  const double p_scale = green.green_constant() / sphere_area(params.N);

  SolveResult out;
  out.report.method = "gradient_flow";
  RadialFunction u = init;
  take_abs(u);
  normalize_constraint(u, uc, params.alpha, K);

  const std::size_t unit_index = grid->index_near(1.0);
  double step = cfg.step;
  double q_value = critical_quotient(u, params, K);
  bool converged = false;
  bool concentration_warned = false;
  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    const auto cg = critical_gradient(u, params, K);
    q_value = cg.quotient;
    auto dir = green.kernel().apply(cg.grad);
    for (double& v : dir) v *= p_scale;
    const double residual = std::sqrt(std::max(dot(cg.grad, dir), 0.0)) /
                            (2 * std::max(q_value, kTiny));
    if (residual < cfg.tol) {
      converged = true;
      break;
    }
    bool accepted = false;
    for (int cut = 0; cut < 60; ++cut) {
      RadialFunction cand = u;
      for (std::size_t i = 0; i < cand.size(); ++i)
        cand.values[i] -= step * dir[i];
      take_abs(cand);
      double cand_q;
      try {
        normalize_constraint(cand, uc, params.alpha, K);
        cand_q = critical_quotient(cand, params, K);
      } catch (const std::invalid_argument&) {
        step /= 2;
        continue;
      }
      if (cand_q <= q_value + 1e-12 * q_value) {
        u = std::move(cand);
        q_value = cand_q;
        accepted = true;
        step = std::min(step * 1.5, cfg.step * 1e6);
        break;
      }
      step /= 2;
    }

    // Half-mass concentration rescaling: dilate so that half the nonlocal
    // mass sits inside the unit ball (exact index shift on the log grid).
    if (accepted && cfg.rescale_every > 0 &&
        (iter + 1) % cfg.rescale_every == 0) {
      const auto density = nonlocal_density(u, uc, params.alpha, K);
      double total = 0;
      for (double d : density) total += d;
      double cum = 0;
      std::size_t half_index = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        cum += density[i];
        if (cum >= total / 2) {
          half_index = i;
          break;
        }
      }
      if (half_index < 4 || half_index + 4 >= n) {
        if (!concentration_warned)
          out.report.warnings.push_back(
              "concentration: half-mass radius at the grid boundary");
        concentration_warned = true;
      }
      const int shift = int(half_index) - int(unit_index);
      if (shift != 0) {
        RadialFunction cand = dilate_grid_exact(u, shift);
        try {
          normalize_constraint(cand, uc, params.alpha, K);
          const double cand_q = critical_quotient(cand, params, K);
          if (std::abs(cand_q - q_value) <= 1e-8 * q_value) {
            u = std::move(cand);
            q_value = cand_q;
          } else if (!concentration_warned) {
            out.report.warnings.push_back(
                "concentration: rescaling skipped (boundary truncation)");
            concentration_warned = true;
          }
        } catch (const std::invalid_argument&) {
          // dilation pushed the profile off the grid; keep u
        }
      }
    }
    out.report.energy_history.push_back(q_value);
    if (!accepted) break;
  }

  out.report.converged = converged;
  out.report.iterations = iter;
  out.report.final_energy = energy_critical(u, params, K, green);
  const double r_max = grid->r_max();
  out.report.decay = fit_decay(u, r_max / 10, r_max, params);
  out.u = std::move(u);
  return out;
}

// ---------------------------------------------------------------------------
// Fixed-point iteration on the integral system

SolveResult solve_fixed_point(const ProblemParams& params,
                              const KernelMatrix& K, const SolverConfig& cfg,
                              const RadialFunction& init) {
  check_config(cfg);
  require_valid(params);
  if (init.grid != K.grid())
    throw std::invalid_argument("solve_fixed_point: init grid mismatch");
  if (params.p && existence_verdict(params) != Existence::Exists)
    throw std::invalid_argument(
        "solve_fixed_point: p outside the existence range");

  const auto grid = K.grid();
  const bool critical = params.critical();
  const double uc = upper_critical(params.N, params.alpha, params.mu);
  const double p = critical ? uc : *params.p;
  const double homogeneity = 2 * p - 2;

  SolveResult out;
  out.report.method = "fixed_point";
  RadialFunction u = init;
  take_abs(u);

  const HelmholtzSolver* helmholtz = nullptr;
  const RieszGreen* green = nullptr;
  std::unique_ptr<HelmholtzSolver> helmholtz_owned;
  std::unique_ptr<RieszGreen> green_owned;
  if (critical) {
    green_owned = std::make_unique<RieszGreen>(params.N, grid);
    green = green_owned.get();
  } else {
    helmholtz_owned = std::make_unique<HelmholtzSolver>(params.N, grid);
    helmholtz = helmholtz_owned.get();
  }

  auto normalize = [&](RadialFunction& f) -> double {
    if (critical) {
      const double d = double_integral_D(f, uc, params.alpha, K);
      if (!(d > 0))
        throw std::invalid_argument("solve_fixed_point: zero profile");
      const double scale = std::pow(d, 1 / (2 * uc));
      for (double& v : f.values) v /= scale;
      return scale;
    }
    const double norm = std::sqrt(kinetic_energy(f) + mass_integral(f));
    if (!(norm > 0))
      throw std::invalid_argument("solve_fixed_point: zero profile");
    for (double& v : f.values) v /= norm;
    return norm;
  };

  normalize(u);
  bool converged = false;
  bool diverged = false;
  double lambda = 1.0;
  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    const auto w = weighted_potential(u, p, params.alpha, K);
    RadialFunction rhs(grid);
    for (std::size_t i = 0; i < rhs.size(); ++i)
      rhs.values[i] = u.values[i] > 0
                          ? std::pow(grid->node(i), -params.alpha) *
                                w.values[i] * std::pow(u.values[i], p - 1)
                          : 0.0;
    RadialFunction next = critical ? green->apply(rhs) : helmholtz->solve(rhs);
    take_abs(next);
    lambda = normalize(next);
    if (!(lambda > 1e-14 && lambda < 1e14)) {
      diverged = true;
      out.report.warnings.push_back(
          "divergence: renormalization factor left (1e-14, 1e14)");
      break;
    }
    const double change = rel_change(next, u);
    u = std::move(next);

    if (critical) {
      out.report.energy_history.push_back(critical_quotient(u, params, K));
    } else {
      // Energy of the physically rescaled iterate.
      RadialFunction phys = u;
      const double c = std::pow(lambda, -1.0 / homogeneity);
      for (double& v : phys.values) v *= c;
      out.report.energy_history.push_back(
          energy_subcritical(phys, params, K).energy);
    }
    if (change < cfg.tol) {
      converged = true;
      ++iter;
      break;
    }
  }

  out.report.converged = converged && !diverged;
  out.report.iterations = iter;
  if (!critical) {
    // Restore the physical scale of the EL equation: u = lambda^{-1/(2p-2)} u_hat.
    const double c = std::pow(lambda, -1.0 / homogeneity);
    for (double& v : u.values) v *= c;
    out.report.final_energy = energy_subcritical(u, params, K);
  } else {
    out.report.final_energy = energy_critical(u, params, K, *green);
  }
  const double r_max = grid->r_max();
  out.report.decay = critical ? fit_decay(u, r_max / 10, r_max, params)
                              : fit_decay(u, r_max / 10, r_max);
  out.u = std::move(u);
  return out;
}

// ---------------------------------------------------------------------------
// Tail analysis

namespace {

DecayReport fit_decay_impl(const RadialFunction& u, double lo, double hi,
                           const ProblemParams* params) {
  if (!(lo < hi)) throw std::invalid_argument("fit_decay: empty window");
  const auto& g = *u.grid;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  std::size_t window_nodes = 0;
  std::size_t violations = 0;
  double bound_c = 0, bound_e = 0;
  if (params) {
    bound_c = decay_constant(params->N, params->alpha, params->mu);
    bound_e = -(params->N - 2) / 2.0;
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.node(i);
    if (r < lo || r > hi) continue;
    ++window_nodes;
    if (params) {
      const double bound = bound_c * std::pow(r, bound_e);
      if (u.values[i] > bound * (1 + 1e-12)) ++violations;
    }
    if (!(u.values[i] > 0)) continue;
    const double x = std::log(r);
    const double y = std::log(u.values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2)
    throw std::invalid_argument("fit_decay: empty window (needs 2+ nodes)");
  DecayReport rep;
  const double det = double(count) * sxx - sx * sx;
  rep.slope = (double(count) * sxy - sx * sy) / det;
  if (params) {
    rep.bound_checked = true;
    rep.violation_fraction = double(violations) / double(window_nodes);
    rep.bound_ok = rep.violation_fraction <= 0.05;
  }
  return rep;
}

}  // namespace

DecayReport fit_decay(const RadialFunction& u, double window_lo,
                      double window_hi) {
  return fit_decay_impl(u, window_lo, window_hi, nullptr);
}

DecayReport fit_decay(const RadialFunction& u, double window_lo,
                      double window_hi, const ProblemParams& params) {
  return fit_decay_impl(u, window_lo, window_hi, &params);
}

}  // namespace choquard
