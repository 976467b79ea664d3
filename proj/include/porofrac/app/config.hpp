#pragma once

#include <map>
#include <string>

#include "porofrac/material.hpp"

namespace porofrac::app {

enum class ScenarioId { Footing, Injection, Custom };

enum class FootingVariant {
  DrainedElasticPlastic,       ///< M = 0, b = 0
  UndrainedPoroElastic,        ///< s_max raised to 1e4 MN/m^2
  UndrainedPoroElasticPlastic  ///< all couplings active
};

enum class InjectionVariant {
  PoroElastic,        ///< s_max raised to 1e4 MN/m^2
  PoroElasticPlastic  ///< all couplings active
};

/// One run, parsed from a flat key = value file (units in comments).
struct ScenarioConfig {
  ScenarioId scenario = ScenarioId::Footing;
  FootingVariant footing_variant = FootingVariant::UndrainedPoroElasticPlastic;
  InjectionVariant injection_variant = InjectionVariant::PoroElasticPlastic;
  Real permeability_factor = 1.0;
  bool outer_permeable = true;  ///< fluid condition on the non-symmetry boundary

  // geometry (m)
  Real W = 23.088;  ///< footing full width
  Real H = 4.758;   ///< footing height
  Real a = 4.587;   ///< footing width / notch length
  Real L = 80.0;    ///< injection square edge

  // mesh
  int nx = 66;          ///< footing cells across the half width
  int ny = 36;          ///< footing cells across the height
  Real h_fine = 0.25;   ///< injection band cell size (m)
  Real growth = 1.6;    ///< grading ratio outside the band

  MaterialParams material;

  // time stepping and loading
  Real tau = 1e-3;          ///< time step (s)
  int n_steps = 0;          ///< injection/custom step count
  Real u_increment = 5e-6;  ///< footing displacement increment per step (m)
  Real u_total = 0.0023;    ///< footing total displacement (m)
  Real inject_rate = 0.01;  ///< injected mass rate over the notch (kg/s)

  // output
  std::string output_dir = "out";
  int output_every = 0;  ///< VTK cadence in steps; 0 writes only the final state
  int threads = 1;

  /// All keys as resolved (for the run manifest).
  std::map<std::string, std::string> resolved;

  void validate() const;  ///< throws ConfigError
};

/// Parses a config file. Unknown keys are rejected; the documented unused
/// keys (porosity, rho_s, m0) are accepted and ignored.
ScenarioConfig parse_config_file(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text, const std::string& origin = "<text>");

/// Template config text for `porofrac scenarios`.
std::string footing_template();
std::string injection_template();

/// Applies the desk-scale overrides (coarse mesh, fewer steps).
void apply_desk_preset(ScenarioConfig& cfg);

}  // namespace porofrac::app
