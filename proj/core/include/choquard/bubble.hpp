#pragma once

#include "choquard/grid.hpp"

namespace choquard {

/// Radial Aubin-Talenti profile centered at the origin:
///   U(r) = [N(N-2)]^{(N-2)/4} (t / (t^2 + r^2))^{(N-2)/2},
/// the extremal family of the Sobolev inequality, solving
/// -Delta U = U^{(N+2)/(N-2)}.
double talenti_bubble(int N, double t, double r);

RadialFunction talenti_bubble_profile(GridPtr grid, double t);

}  // namespace choquard
