#pragma once

#include <string>

#include "choquard/energy.hpp"
#include "choquard/montecarlo.hpp"
#include "choquard/solver.hpp"

namespace choquard {

/// Flat JSON object with the seven report fields as decimal numbers.
std::string to_json(const EnergyReport& report);

/// JSON with converged, iterations, energy_history, final (EnergyReport),
/// decay, method and warnings.
std::string to_json(const SolveReport& report);

/// JSON {value, stderr, samples, seed}.
std::string to_json(const McEstimate& estimate);

}  // namespace choquard
