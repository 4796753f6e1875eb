#include "choquard/bubble.hpp"

#include <cmath>
#include <stdexcept>

namespace choquard {

double talenti_bubble(int N, double t, double r) {
  if (N < 3) throw std::invalid_argument("talenti_bubble: N >= 3 required");
  if (!(t > 0)) throw std::invalid_argument("talenti_bubble: t > 0 required");
  const double amp = std::pow(double(N) * (N - 2), (N - 2) / 4.0);
  return amp * std::pow(t / (t * t + r * r), (N - 2) / 2.0);
}

RadialFunction talenti_bubble_profile(GridPtr grid, double t) {
  const int N = grid->dimension();
  return sample(std::move(grid),
                [N, t](double r) { return talenti_bubble(N, t, r); });
}

}  // namespace choquard
