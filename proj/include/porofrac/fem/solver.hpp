#pragma once

#include "porofrac/fem/assembly.hpp"

namespace porofrac::fem {

struct SolverOptions {
  Real newton_abs = 1e-8;   ///< times the per-field residual scale
  Real newton_rel = 1e-10;  ///< relative to the first iterate
  int max_newton = 25;
  Real eps_ref = 1e-6;      ///< reference strain behind the residual scales
  int threads = 1;
  bool solve_phase = true;
};

struct StepReport {
  int iterations = 0;
  Real r0 = 0;
  Real r_final = 0;
  bool converged = false;
  Eigen::VectorXd residual;  ///< full residual at convergence; fixed rows carry reactions
  Real mass_error = 0;
  Real max_d_overshoot = 0;
  std::vector<Real> history;  ///< scaled residual per Newton iteration
};

/// One time step of the one-pass operator split: (1) Newton on the coupled
/// displacement/flux block with the phase field frozen at time n, (2) crack
/// driving history update, (3) one linear solve for the phase field,
/// (4) irreversibility clamp d <- max(d, d_n), (5) state commit.
/// Dirichlet values are taken from the DofMap (set per step by the caller).
/// Throws ConvergenceError if the Newton loop fails.
SolutionState solve_step(const FemCache& cache, const DofMap& dofs, const NeumannBC& neumann,
                         const SolutionState& committed, Real tau, const MaterialParams& mat,
                         const SolverOptions& opts, StepReport* report = nullptr);

/// Writes nodal phase-field values into the state and refreshes the
/// per-point d and grad(d); used to seed initial cracks.
void impose_phase_field(const FemCache& cache, const DofMap& dofs, SolutionState& state);

}  // namespace porofrac::fem
