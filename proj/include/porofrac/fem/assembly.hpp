#pragma once

#include <Eigen/Sparse>

#include "porofrac/fem/state.hpp"

namespace porofrac::fem {

using SparseMat = Eigen::SparseMatrix<Real>;

struct AssembledSystem {
  Eigen::VectorXd residual;
  SparseMat tangent;
};

/// Implicit fluid-content update m = m_n - tau div(h).
inline Real mass_update(Real m_n, Real tau, Real div_h) { return m_n - tau * div_h; }

struct AssembleOptions {
  bool frozen_plastic = false;  ///< no return mapping, internals held at time n
  bool with_tangent = true;
  int threads = 1;
};

/// Assembles the coupled displacement/flux residual and tangent at the
/// workspace iterate, with the phase field and the permeability frozen at
/// the committed state (one-pass split). Enhanced modes are condensed
/// exactly: the element-local parameters in `work.eas` are driven to
/// stationarity before the element matrices are formed. Stacked dof layout:
/// displacements first, flux dofs after.
AssembledSystem assemble_mech_flux(const FemCache& cache, const DofMap& dofs,
                                   const NeumannBC& neumann, const SolutionState& committed,
                                   StepWorkspace& work, Real tau, const MaterialParams& mat,
                                   const AssembleOptions& opts);

/// Incremental potential of the (u, q) problem at frozen plastic state,
/// frozen history and frozen permeability, with the enhanced modes minimized
/// out (`eas` updated in place). The plastic dissipation and fracture terms
/// are additive constants under these freezes and are omitted.
Real incremental_potential(const FemCache& cache, const DofMap& dofs, const NeumannBC& neumann,
                           const SolutionState& committed, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& q, std::vector<Vec4>& eas, Real tau,
                           const MaterialParams& mat);

/// Phase-field residual and tangent at nodal values `d` for the given
/// per-point crack driving history. The kernel is quadratic, so one Newton
/// step solves the system; the tangent is symmetric positive definite for
/// psi_c > 0.
AssembledSystem assemble_phase(const FemCache& cache, const DofMap& dofs,
                               const std::vector<std::array<Real, 4>>& history,
                               const Eigen::VectorXd& d, const MaterialParams& mat);

/// In-plane permeability inverse with the invertibility floor applied; the
/// tensor itself comes from the committed point state (one-pass lag).
Mat2 permeability_inverse(const PointState& committed, Real L_perp, const MaterialParams& mat);

/// Sum of integral(m - m_n) dV over the mesh plus tau times the net outflux
/// through element boundaries (interior faces cancel, split faces and the
/// domain boundary remain): zero to roundoff by the implicit mass update.
Real mass_balance_residual(const FemCache& cache, const DofMap& dofs,
                           const SolutionState& before, const SolutionState& after, Real tau);

namespace detail {
// Relative floor added to the permeability before inversion; a fully broken
// point with zero opening would otherwise make the Darcy term singular.
inline constexpr Real kPermFloorRel = 1e-8;
}  // namespace detail

}  // namespace porofrac::fem
