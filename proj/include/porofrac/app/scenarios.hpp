#pragma once

#include "porofrac/app/config.hpp"
#include "porofrac/fem/solver.hpp"

namespace porofrac::app {

/// Everything a run needs: discretization, boundary data, schedules and the
/// probes used for the output curves. Generators are pure functions of the
/// configuration.
struct Scenario {
  fem::Mesh mesh;
  fem::FemCache cache;
  fem::DofMap dofs;
  fem::NeumannBC neumann;
  fem::SolutionState initial;
  MaterialParams material;
  Real tau = 0;
  int n_steps = 0;

  std::vector<int> ramped_u_dofs;  ///< Dirichlet dofs ramping linearly to u_target
  Real u_target = 0;
  std::vector<int> reaction_dofs;  ///< rows summed into the load curve

  int probe_elem = -1;                 ///< element for the pressure-volume curve
  std::vector<int> line_nodes;         ///< nodes on the profile line, sorted by x
  std::vector<int> profile_elems;      ///< elements just below the line, sorted by x
  Real inject_rate = 0;

  /// Writes the step's Dirichlet values into the dof map.
  void set_step_values(int step);
};

Scenario build_footing_scenario(const ScenarioConfig& cfg);
Scenario build_injection_scenario(const ScenarioConfig& cfg);
Scenario build_custom_scenario(const ScenarioConfig& cfg);
Scenario build_scenario(const ScenarioConfig& cfg);

}  // namespace porofrac::app
