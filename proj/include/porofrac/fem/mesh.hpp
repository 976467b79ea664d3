#pragma once

#include <array>
#include <vector>

#include "porofrac/tensors.hpp"

namespace porofrac::fem {

/// Geometric boundary tags assigned by the structured generator.
enum BoundaryTag : int {
  kInterior = 0,
  kLeft = 1,
  kRight = 2,
  kBottom = 3,
  kTop = 4,
};

/// Conforming quadrilateral mesh with a global edge orientation. Each edge
/// runs from its lower to its higher node index; the global edge normal is
/// the edge tangent rotated by -90 degrees. An element whose outward normal
/// on a side matches the global normal carries sign +1 there, its neighbor
/// carries -1, which is what makes the lowest-order H(div) space normal-flux
/// conforming.
struct Mesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 4>> quads;  ///< counterclockwise connectivity

  struct Edge {
    int n0 = -1, n1 = -1;       ///< node ids, n0 < n1
    int elem[2] = {-1, -1};     ///< adjacent elements; elem[1] = -1 on the boundary
    int tag = kInterior;
  };
  std::vector<Edge> edges;
  std::vector<std::array<int, 4>> elem_edges;  ///< edge id per element side
  std::vector<std::array<int, 4>> elem_signs;  ///< orientation sign per element side
  std::vector<Real> char_length;               ///< per-element size h^e (sqrt of area)

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_elems() const { return static_cast<int>(quads.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  /// Side s of a quad runs from vertex s to vertex (s+1) % 4.
  std::pair<int, int> side_nodes(int elem, int side) const {
    return {quads[elem][side], quads[elem][(side + 1) % 4]};
  }

  Vec2 edge_midpoint(int e) const { return 0.5 * (nodes[edges[e].n0] + nodes[edges[e].n1]); }
  Real edge_length(int e) const { return (nodes[edges[e].n1] - nodes[edges[e].n0]).norm(); }

  /// Rebuilds edges, element-edge connectivity, signs and element sizes.
  void finalize();

  /// Throws AssemblyError if any element Jacobian is non-positive at the
  /// 2x2 Gauss points or an interior edge lacks opposite orientations.
  void validate() const;
};

/// Tensor-product mesh over the given sorted coordinate lines; boundary
/// edges are tagged left/right/bottom/top.
Mesh make_structured_rect(const std::vector<Real>& xs, const std::vector<Real>& ys);

/// Re-derives the left/right/bottom/top tags of boundary edges from the
/// bounding box of the node cloud (finalize() resets tags).
void tag_rect_boundary(Mesh& mesh);

/// Coordinate line helper: uniform spacing from a to b with n cells.
std::vector<Real> linspace_cells(Real a, Real b, int n);

/// Coordinate lines spanning [a, b] with cell size `fine` inside
/// [fine_lo, fine_hi] and geometrically growing cells (ratio `growth`)
/// toward the outer ends.
std::vector<Real> graded_lines(Real a, Real b, Real fine_lo, Real fine_hi, Real fine,
                               Real growth = 1.6);

}  // namespace porofrac::fem
