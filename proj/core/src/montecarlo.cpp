#include "choquard/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

#include "choquard/exponents.hpp"
#include "choquard/grid.hpp"
#include "choquard/parallel.hpp"

namespace choquard {

namespace {

struct SplitMix {
  std::uint64_t state;
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() {  // in (0, 1)
    return double(next() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }
};

// Independent stream for sample i of a run seeded with `seed`.
SplitMix sample_stream(std::uint64_t seed, std::uint64_t index) {
  SplitMix mixer{index};
  const std::uint64_t h = mixer.next();
  return SplitMix{seed ^ h};
}

struct Sampler {
  const McProposal* proposal;
  int N;
  double omega;  // sphere_area(N)

  // Draws a point and returns its mixture density.
  double draw(SplitMix& rng, std::vector<double>& x) const {
    const auto& centers = proposal->centers;
    const std::size_t n_centers = centers.empty() ? 1 : centers.size();
    std::size_t c = 0;
    if (n_centers > 1)
      c = std::min<std::size_t>(std::size_t(rng.uniform() * double(n_centers)),
                                n_centers - 1);
    const double s = proposal->scale;
    const double w = rng.uniform();
    const double radius = s * std::pow(w / (1 - w), 1.0 / N);
    // Isotropic direction from Box-Muller pairs.
    double norm_sq = 0;
    do {
      for (int k = 0; k < N; k += 2) {
        const double u1 = rng.uniform();
        const double u2 = rng.uniform();
        const double rho = std::sqrt(-2 * std::log(u1));
        x[k] = rho * std::cos(2 * M_PI * u2);
        if (k + 1 < N) x[k + 1] = rho * std::sin(2 * M_PI * u2);
      }
      norm_sq = 0;
      for (int k = 0; k < N; ++k) norm_sq += x[k] * x[k];
    } while (norm_sq == 0);
    const double scale = radius / std::sqrt(norm_sq);
    for (int k = 0; k < N; ++k) x[k] *= scale;
    if (n_centers > 1 || !centers.empty()) {
      const auto& ctr = centers[c];
      for (int k = 0; k < N; ++k) x[k] += ctr[k];
    }
    return density(x);
  }

  double component_density(double r) const {
    const double s = proposal->scale;
    const double t = std::pow(r / s, N);
    return N / (omega * std::pow(s, N) * (1 + t) * (1 + t));
  }

  double density(const std::vector<double>& x) const {
    const auto& centers = proposal->centers;
    if (centers.empty()) {
      double r_sq = 0;
      for (double v : x) r_sq += v * v;
      return component_density(std::sqrt(r_sq));
    }
    double q = 0;
    for (const auto& ctr : centers) {
      double r_sq = 0;
      for (int k = 0; k < N; ++k) {
        const double d = x[k] - ctr[k];
        r_sq += d * d;
      }
      q += component_density(std::sqrt(r_sq));
    }
    return q / double(centers.size());
  }
};

constexpr std::uint64_t kBlock = 8192;

struct Accumulator {
  double sum = 0;
  double sum_sq = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
  }
};

McEstimate finalize(const std::vector<Accumulator>& blocks,
                    std::uint64_t samples, std::uint64_t seed) {
  double sum = 0, sum_sq = 0;
  for (const auto& b : blocks) {
    sum += b.sum;
    sum_sq += b.sum_sq;
  }
  McEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.value = sum / double(samples);
  if (samples > 1) {
    const double var =
        std::max(0.0, (sum_sq - double(samples) * est.value * est.value) /
                          double(samples - 1));
    est.std_error = std::sqrt(var / double(samples));
  }
  return est;
}

void check_mc_args(int N, std::uint64_t samples) {
  if (N < 2) throw std::invalid_argument("monte carlo: N >= 2 required");
  if (samples == 0) throw std::invalid_argument("monte carlo: samples >= 1");
}

template <class PerSample>
std::vector<Accumulator> run_blocks(std::uint64_t samples,
                                    const PerSample& body,
                                    std::size_t lanes = 1) {
  const std::uint64_t n_blocks = (samples + kBlock - 1) / kBlock;
  std::vector<Accumulator> acc(n_blocks * lanes);
  std::exception_ptr error;
  std::mutex error_mutex;
  parallel_for(n_blocks, [&](std::size_t b) {
    try {
      const std::uint64_t begin = b * kBlock;
      const std::uint64_t end = std::min(samples, begin + kBlock);
      for (std::uint64_t i = begin; i < end; ++i)
        body(i, &acc[b * lanes]);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  });
  if (error) std::rethrow_exception(error);
  return acc;
}

std::vector<Accumulator> lane(const std::vector<Accumulator>& acc,
                              std::size_t lanes, std::size_t which) {
  std::vector<Accumulator> out(acc.size() / lanes);
  for (std::size_t b = 0; b < out.size(); ++b) out[b] = acc[b * lanes + which];
  return out;
}

}  // namespace

McEstimate mc_double_integral(const Field& f, const Field& g, double alpha,
                              double beta, double mu, int N,
                              std::uint64_t samples, std::uint64_t seed,
                              const McProposal& proposal_x,
                              const McProposal& proposal_y) {
  check_mc_args(N, samples);
  const double omega = sphere_area(N);
  const Sampler sx{&proposal_x, N, omega};
  const Sampler sy{&proposal_y, N, omega};

  auto acc = run_blocks(samples, [&](std::uint64_t i, Accumulator* out) {
    SplitMix rng = sample_stream(seed, i);
    thread_local std::vector<double> x, y;
    x.assign(std::size_t(N), 0.0);
    y.assign(std::size_t(N), 0.0);
    const double qx = sx.draw(rng, x);
    const double qy = sy.draw(rng, y);
    double rx_sq = 0, ry_sq = 0, d_sq = 0;
    for (int k = 0; k < N; ++k) {
      rx_sq += x[k] * x[k];
      ry_sq += y[k] * y[k];
      const double d = x[k] - y[k];
      d_sq += d * d;
    }
    const double weight = std::pow(rx_sq, -alpha / 2) *
                          std::pow(ry_sq, -beta / 2) * std::pow(d_sq, -mu / 2);
    const double v = f(x) * g(y) * weight / (qx * qy);
    if (!std::isfinite(v))
      throw std::runtime_error("mc_double_integral: nonfinite sample");
    out->add(v);
  });
  return finalize(acc, samples, seed);
}

McEstimate mc_lp_norm(const Field& f, double p, int N, std::uint64_t samples,
                      std::uint64_t seed, const McProposal& proposal) {
  check_mc_args(N, samples);
  if (!(p > 0)) throw std::invalid_argument("mc_lp_norm: p > 0 required");
  const Sampler sampler{&proposal, N, sphere_area(N)};
  auto acc = run_blocks(samples, [&](std::uint64_t i, Accumulator* out) {
    SplitMix rng = sample_stream(seed, i);
    thread_local std::vector<double> x;
    x.assign(std::size_t(N), 0.0);
    const double q = sampler.draw(rng, x);
    const double v = std::pow(std::abs(f(x)), p) / q;
    if (!std::isfinite(v))
      throw std::runtime_error("mc_lp_norm: nonfinite sample");
    out->add(v);
  });
  auto est = finalize(acc, samples, seed);
  // Delta-method error of the p-th root.
  const double root = std::pow(est.value, 1 / p);
  est.std_error = est.value > 0
                      ? root / (p * est.value) * est.std_error
                      : 0;
  est.value = root;
  return est;
}

double hls_ratio(const Field& f, const Field& g, double r, double s,
                 double alpha, double beta, double mu, int N,
                 std::uint64_t samples, std::uint64_t seed,
                 const McProposal& proposal_x, const McProposal& proposal_y) {
  if (!hls_exponent_check(r, s, alpha, beta, mu, N))
    throw std::invalid_argument(
        "hls_ratio: exponent relation fails (hls_exponent_check)");
  const auto numerator = mc_double_integral(f, g, alpha, beta, mu, N, samples,
                                            seed, proposal_x, proposal_y);
  const auto nf =
      mc_lp_norm(f, r, N, samples, seed ^ 0x9E3779B97F4A7C15ull, proposal_x);
  const auto ng =
      mc_lp_norm(g, s, N, samples, seed ^ 0x7F4A7C159E3779B9ull, proposal_y);
  return numerator.value / (nf.value * ng.value);
}

double Bump::operator()(double r) const {
  if (amplitude == 0) return 0;
  const double t = r / radius;
  if (t >= 1) return 0;
  return amplitude * std::exp(1 - 1 / (1 - t * t));
}

BrezisLiebReport brezis_lieb_split(const Bump& u, const Bump& v, double shift,
                                   const ProblemParams& params,
                                   std::uint64_t samples, std::uint64_t seed) {
  if (!params.critical())
    throw std::invalid_argument(
        "brezis_lieb_split: params must be critical (p omitted)");
  require_valid(params);
  const int N = params.N;
  check_mc_args(N, samples);
  const bool v_active = v.amplitude != 0;
  if (v_active && u.radius + v.radius >= shift)
    throw std::invalid_argument("brezis_lieb_split: bump supports intersect");

  const double q = upper_critical(params.N, params.alpha, params.mu);
  const double alpha = params.alpha;

  McProposal proposal;
  proposal.scale = std::max(u.radius, v.radius);
  proposal.centers.push_back(std::vector<double>(std::size_t(N), 0.0));
  if (v_active) {
    std::vector<double> ctr(std::size_t(N), 0.0);
    ctr[0] = shift;
    proposal.centers.push_back(ctr);
  }
  const Sampler sampler{&proposal, N, sphere_area(N)};

  auto fu = [&](const std::vector<double>& x) {
    double r_sq = 0;
    for (double t : x) r_sq += t * t;
    return std::pow(u(std::sqrt(r_sq)), q);
  };
  auto fv = [&](const std::vector<double>& x) {
    if (!v_active) return 0.0;
    double r_sq = 0;
    for (int k = 0; k < N; ++k) {
      const double d = x[k] - (k == 0 ? shift : 0.0);
      r_sq += d * d;
    }
    return std::pow(v(std::sqrt(r_sq)), q);
  };

  // Lanes: 0 = D(u+v_R), 1 = D(u), 2 = D(v_R), 3 = cross terms (pointwise
  // difference, exact cancellation of the common parts).
  auto acc = run_blocks(
      samples,
      [&](std::uint64_t i, Accumulator* out) {
        SplitMix rng = sample_stream(seed, i);
        thread_local std::vector<double> x, y;
        x.assign(std::size_t(N), 0.0);
        y.assign(std::size_t(N), 0.0);
        const double qx = sampler.draw(rng, x);
        const double qy = sampler.draw(rng, y);
        double rx_sq = 0, ry_sq = 0, d_sq = 0;
        for (int k = 0; k < N; ++k) {
          rx_sq += x[k] * x[k];
          ry_sq += y[k] * y[k];
          const double d = x[k] - y[k];
          d_sq += d * d;
        }
        const double base = std::pow(rx_sq, -alpha / 2) *
                            std::pow(ry_sq, -alpha / 2) *
                            std::pow(d_sq, -params.mu / 2) / (qx * qy);
        const double ux = fu(x), uy = fu(y);
        const double vx = fv(x), vy = fv(y);
        const double h_u = ux * uy * base;
        const double h_v = vx * vy * base;
        const double h_sum = (ux + vx) * (uy + vy) * base;
        if (!std::isfinite(h_sum) || !std::isfinite(h_u) || !std::isfinite(h_v))
          throw std::runtime_error("brezis_lieb_split: nonfinite sample");
        out[0].add(h_sum);
        out[1].add(h_u);
        out[2].add(h_v);
        out[3].add(h_sum - h_u - h_v);
      },
      4);

  BrezisLiebReport rep;
  rep.d_sum = finalize(lane(acc, 4, 0), samples, seed);
  rep.d_u = finalize(lane(acc, 4, 1), samples, seed);
  rep.d_v = finalize(lane(acc, 4, 2), samples, seed);
  rep.cross = finalize(lane(acc, 4, 3), samples, seed);
  rep.defect = rep.d_u.value > 0
                   ? std::abs(rep.cross.value) / rep.d_u.value
                   : 0;
  return rep;
}

}  // namespace choquard
