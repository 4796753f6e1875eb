#include "choquard/serialize.hpp"

#include "json.hpp"

namespace choquard {

namespace {

using nlohmann::json;

json energy_json(const EnergyReport& r) {
  return json{{"kinetic", r.kinetic},
              {"mass", r.mass},
              {"nonlocal_d", r.nonlocal_d},
              {"energy", r.energy},
              {"nehari_residual", r.nehari_residual},
              {"pohozaev_residual", r.pohozaev_residual},
              {"quotient", r.quotient}};
}

json decay_json(const DecayReport& d) {
  return json{{"slope", d.slope},
              {"bound_checked", d.bound_checked},
              {"bound_ok", d.bound_ok},
              {"violation_fraction", d.violation_fraction}};
}

}  // namespace

std::string to_json(const EnergyReport& report) {
  return energy_json(report).dump(2) + "\n";
}

std::string to_json(const SolveReport& report) {
  json j{{"converged", report.converged},
         {"iterations", report.iterations},
         {"energy_history", report.energy_history},
         {"final", energy_json(report.final_energy)},
         {"decay", decay_json(report.decay)},
         {"method", report.method},
         {"warnings", report.warnings}};
  return j.dump(2) + "\n";
}

std::string to_json(const McEstimate& estimate) {
  json j{{"value", estimate.value},
         {"stderr", estimate.std_error},
         {"samples", estimate.samples},
         {"seed", estimate.seed}};
  return j.dump(2) + "\n";
}

}  // namespace choquard
