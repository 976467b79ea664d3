#pragma once

#include "porofrac/app/output.hpp"

namespace porofrac::app {

inline constexpr const char* kVersion = "0.1.0";

/// Everything the acceptance checks need, collected while the run advances.
struct RunResult {
  int exit_code = 0;
  int failed_step = -1;
  std::string error;
  int steps_done = 0;
  Real final_time = 0;

  // footing: load-displacement curve
  std::vector<Real> u_curve;
  std::vector<Real> F_curve;

  // injection: probe pressure over injected volume
  std::vector<Real> V_curve;
  std::vector<Real> p_curve;

  // final line profile along the notch line (element row just below it)
  struct ProfileRow {
    Real x, m, m_e, m_p, p, w, d;
  };
  std::vector<ProfileRow> profile;
  Real crack_extent = 0;  ///< arc length of d > 0.9 along the notch line

  // step-wise diagnostics
  Real max_mass_error = 0;        ///< absolute mass-balance residual
  Real mass_scale = 0;            ///< max |stored mass| for normalization
  bool d_monotone = true;         ///< nodal irreversibility held every step
  bool internals_monotone = true; ///< alpha, H, w_plast never decreased
  bool crack_surface_monotone = true;
  Real total_newton_iterations = 0;
};

/// Runs a built scenario; optionally writes VTK/CSV/manifest artifacts to
/// cfg.output_dir. The final committed state is returned through `final_out`
/// when non-null.
RunResult run_scenario(Scenario& sc, const ScenarioConfig& cfg, bool write_outputs,
                       fem::SolutionState* final_out = nullptr);

/// Builds the scenario from the config and runs it with artifacts.
RunResult run(const ScenarioConfig& cfg);

}  // namespace porofrac::app
