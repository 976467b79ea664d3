#pragma once

#include "porofrac/fem/elements.hpp"
#include "porofrac/plasticity.hpp"

namespace porofrac::fem {

/// Committed solution at a time level: global vectors, per-quadrature-point
/// constitutive states and the condensed enhanced-strain parameters.
struct SolutionState {
  Eigen::VectorXd u;
  Eigen::VectorXd q;
  Eigen::VectorXd d;
  std::vector<std::array<PointState, 4>> points;
  std::vector<Vec4> eas;
  Real time = 0;
  int step = 0;

  static SolutionState zero(const Mesh& mesh, const DofMap& dofs) {
    SolutionState s;
    s.u = Eigen::VectorXd::Zero(dofs.n_u);
    s.q = Eigen::VectorXd::Zero(dofs.n_q);
    s.d = Eigen::VectorXd::Zero(dofs.n_d);
    s.points.resize(mesh.num_elems());
    s.eas.assign(mesh.num_elems(), Vec4::Zero());
    return s;
  }
};

/// Per-point outcome of the last mechanical assembly, kept for the history
/// update and the commit.
struct QpResult {
  SymTensor3 eps;
  Real m = 0;
  SymTensor3 eps_p;
  Real alpha = 0;
  Real m_p = 0;
  Real gamma = 0;
  SymTensor3 sigma;
  Real dpsi_dm = 0;
  Real psi0_plus = 0;
  Real w_inc = 0;
  bool elastic = true;
  int iterations = 0;
};

/// Mutable iterate of one time step.
struct StepWorkspace {
  Eigen::VectorXd u;
  Eigen::VectorXd q;
  std::vector<Vec4> eas;
  std::vector<std::array<QpResult, 4>> results;

  static StepWorkspace from(const SolutionState& committed) {
    StepWorkspace w;
    w.u = committed.u;
    w.q = committed.q;
    w.eas = committed.eas;
    w.results.resize(committed.points.size());
    return w;
  }
};

}  // namespace porofrac::fem
