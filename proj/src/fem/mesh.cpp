#include "porofrac/fem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "porofrac/errors.hpp"

namespace porofrac::fem {

void Mesh::finalize() {
  edges.clear();
  elem_edges.assign(quads.size(), {-1, -1, -1, -1});
  elem_signs.assign(quads.size(), {0, 0, 0, 0});
  char_length.assign(quads.size(), 0.0);

  std::map<std::pair<int, int>, int> lookup;
  for (int e = 0; e < num_elems(); ++e) {
    for (int s = 0; s < 4; ++s) {
      const auto [a, b] = side_nodes(e, s);
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = lookup.find(key);
      if (it == lookup.end()) {
        Edge edge;
        edge.n0 = key.first;
        edge.n1 = key.second;
        edge.elem[0] = e;
        it = lookup.emplace(key, static_cast<int>(edges.size())).first;
        edges.push_back(edge);
      } else {
        Edge& edge = edges[it->second];
        if (edge.elem[1] != -1) throw AssemblyError("mesh: edge shared by more than two elements", e);
        edge.elem[1] = e;
      }
      elem_edges[e][s] = it->second;
      // Element side tangent runs a -> b; the global edge tangent runs
      // min -> max, so the outward normals agree exactly when a < b.
      elem_signs[e][s] = a < b ? 1 : -1;
    }

    // h^e as the square root of the element area (shoelace formula).
    Real area2 = 0;
    for (int s = 0; s < 4; ++s) {
      const Vec2& p = nodes[quads[e][s]];
      const Vec2& q = nodes[quads[e][(s + 1) % 4]];
      area2 += p.x() * q.y() - q.x() * p.y();
    }
    char_length[e] = std::sqrt(0.5 * std::abs(area2));
  }
}

void Mesh::validate() const {
  const Real g = 1.0 / std::sqrt(3.0);
  const std::array<Vec2, 4> qp = {Vec2(-g, -g), Vec2(g, -g), Vec2(g, g), Vec2(-g, g)};
  for (int e = 0; e < num_elems(); ++e) {
    for (const Vec2& xi : qp) {
      Mat2 J = Mat2::Zero();
      for (int a = 0; a < 4; ++a) {
        const Real sx = a == 0 || a == 3 ? -1.0 : 1.0;
        const Real sy = a < 2 ? -1.0 : 1.0;
        const Vec2 dN(0.25 * sx * (1 + sy * xi.y()), 0.25 * sy * (1 + sx * xi.x()));
        J += nodes[quads[e][a]] * dN.transpose();
      }
      if (J.determinant() <= 0) throw AssemblyError("mesh: non-positive Jacobian", e);
    }
  }
  for (int k = 0; k < num_edges(); ++k) {
    const Edge& edge = edges[k];
    if (edge.elem[1] == -1) continue;
    int signs[2] = {0, 0};
    for (int m = 0; m < 2; ++m)
      for (int s = 0; s < 4; ++s)
        if (elem_edges[edge.elem[m]][s] == k) signs[m] = elem_signs[edge.elem[m]][s];
    if (signs[0] * signs[1] != -1)
      throw AssemblyError("mesh: interior edge without opposite orientations", edge.elem[0]);
  }
}

Mesh make_structured_rect(const std::vector<Real>& xs, const std::vector<Real>& ys) {
  if (xs.size() < 2 || ys.size() < 2) throw ConfigError("structured mesh needs at least one cell");
  Mesh m;
  const int nx = static_cast<int>(xs.size());
  const int ny = static_cast<int>(ys.size());
  m.nodes.reserve(static_cast<size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) m.nodes.emplace_back(xs[i], ys[j]);

  const auto node = [&](int i, int j) { return j * nx + i; };
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i)
      m.quads.push_back({node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)});

  m.finalize();
  tag_rect_boundary(m);
  return m;
}

void tag_rect_boundary(Mesh& mesh) {
  Real xmin = std::numeric_limits<Real>::max(), xmax = -xmin;
  Real ymin = xmin, ymax = -xmin;
  for (const Vec2& x : mesh.nodes) {
    xmin = std::min(xmin, x.x());
    xmax = std::max(xmax, x.x());
    ymin = std::min(ymin, x.y());
    ymax = std::max(ymax, x.y());
  }
  const Real tol = 1e-9 * (xmax - xmin + ymax - ymin);
  for (int k = 0; k < mesh.num_edges(); ++k) {
    auto& edge = mesh.edges[k];
    if (edge.elem[1] != -1) continue;
    const Vec2 mid = mesh.edge_midpoint(k);
    if (std::abs(mid.x() - xmin) < tol)
      edge.tag = kLeft;
    else if (std::abs(mid.x() - xmax) < tol)
      edge.tag = kRight;
    else if (std::abs(mid.y() - ymin) < tol)
      edge.tag = kBottom;
    else if (std::abs(mid.y() - ymax) < tol)
      edge.tag = kTop;
  }
}

std::vector<Real> linspace_cells(Real a, Real b, int n) {
  if (n < 1 || b <= a) throw ConfigError("linspace_cells: need n >= 1 and b > a");
  std::vector<Real> v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = a + (b - a) * i / n;
  return v;
}

std::vector<Real> graded_lines(Real a, Real b, Real fine_lo, Real fine_hi, Real fine, Real growth) {
  if (!(a <= fine_lo && fine_lo < fine_hi && fine_hi <= b))
    throw ConfigError("graded_lines: refinement window outside the domain");
  // Snap the window to whole fine cells.
  const int n_fine = std::max(1, static_cast<int>(std::round((fine_hi - fine_lo) / fine)));
  std::vector<Real> mid = linspace_cells(fine_lo, fine_lo + n_fine * fine, n_fine);
  if (mid.back() > b) throw ConfigError("graded_lines: fine band exceeds the domain");

  std::vector<Real> below;  // from fine_lo downward
  Real y = fine_lo, hcell = fine;
  while (y > a + 1e-12) {
    hcell = std::min(hcell * growth, y - a);
    if (y - hcell - a < 0.5 * hcell) hcell = y - a;  // absorb slivers
    y -= hcell;
    below.push_back(y);
  }
  std::vector<Real> above;  // from the snapped top upward
  y = mid.back();
  hcell = fine;
  while (y < b - 1e-12) {
    hcell = std::min(hcell * growth, b - y);
    if (b - y - hcell < 0.5 * hcell) hcell = b - y;
    y += hcell;
    above.push_back(y);
  }

  std::vector<Real> out(below.rbegin(), below.rend());
  out.insert(out.end(), mid.begin(), mid.end());
  out.insert(out.end(), above.begin(), above.end());
  return out;
}

}  // namespace porofrac::fem
