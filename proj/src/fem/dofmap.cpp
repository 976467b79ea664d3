#include "porofrac/fem/dofmap.hpp"

#include "porofrac/errors.hpp"

namespace porofrac::fem {

DofMap DofMap::build(const Mesh& mesh, const std::vector<int>& split_edges) {
  DofMap map;
  map.n_u = 2 * mesh.num_nodes();
  map.n_d = mesh.num_nodes();
  map.edge_split.assign(mesh.num_edges(), 0);

  map.elem_flux_dof.assign(mesh.num_elems(), {-1, -1, -1, -1});
  for (int e = 0; e < mesh.num_elems(); ++e)
    for (int s = 0; s < 4; ++s) map.elem_flux_dof[e][s] = mesh.elem_edges[e][s];

  int next = mesh.num_edges();
  for (int k : split_edges) {
    const auto& edge = mesh.edges[k];
    if (edge.elem[1] == -1) throw ConfigError("DofMap: cannot split a boundary edge");
    map.edge_split[k] = 1;
    // The second adjacent element gets its own dof.
    for (int s = 0; s < 4; ++s)
      if (mesh.elem_edges[edge.elem[1]][s] == k) map.elem_flux_dof[edge.elem[1]][s] = next;
    ++next;
  }
  map.n_q = next;

  map.u_fixed.assign(map.n_u, 0);
  map.u_value.assign(map.n_u, 0.0);
  map.q_fixed.assign(map.n_q, 0);
  map.q_value.assign(map.n_q, 0.0);
  map.d_fixed.assign(map.n_d, 0);
  map.d_value.assign(map.n_d, 0.0);
  return map;
}

}  // namespace porofrac::fem
