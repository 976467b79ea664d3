#pragma once

#include "porofrac/fem/mesh.hpp"

namespace porofrac::fem {

/// Degree-of-freedom layout: two displacement dofs per node, one normal-flux
/// dof per edge (duplicated on injection faces, where both copies are
/// prescribed), one phase-field dof per node. Dirichlet masks and values are
/// carried per field; constrained dofs are pinned during the solve.
struct DofMap {
  int n_u = 0;
  int n_q = 0;
  int n_d = 0;

  std::vector<std::array<int, 4>> elem_flux_dof;  ///< flux dof per element side
  std::vector<char> edge_split;                   ///< edge carries two independent dofs

  std::vector<char> u_fixed;
  std::vector<Real> u_value;
  std::vector<char> q_fixed;
  std::vector<Real> q_value;
  std::vector<char> d_fixed;
  std::vector<Real> d_value;

  int u_dof(int node, int comp) const { return 2 * node + comp; }

  /// Flux dof of an edge as seen from adjacent element `which` (0 or 1).
  int edge_flux_dof(const Mesh& mesh, int edge, int which) const {
    const auto& e = mesh.edges[edge];
    if (e.elem[which] < 0) return -1;
    for (int s = 0; s < 4; ++s)
      if (mesh.elem_edges[e.elem[which]][s] == edge) return elem_flux_dof[e.elem[which]][s];
    return -1;
  }

  /// Builds the map; `split_edges` lists interior edges whose flux dof is
  /// duplicated (one per face) so that prescribed injection can feed both
  /// neighbors independently.
  static DofMap build(const Mesh& mesh, const std::vector<int>& split_edges = {});
};

/// Natural boundary data: edge tractions (force per unit length) on the
/// displacement field and prescribed fluid potential on permeable edges.
struct NeumannBC {
  struct TractionEdge {
    int edge;
    Vec2 traction;
  };
  struct PotentialEdge {
    int edge;
    Real mu_bar;
  };
  std::vector<TractionEdge> tractions;
  std::vector<PotentialEdge> potentials;
};

}  // namespace porofrac::fem
