#include "porofrac/fem/elements.hpp"

#include "porofrac/errors.hpp"

namespace porofrac::fem {

namespace {

constexpr Real kXiSign[4] = {-1, 1, 1, -1};
constexpr Real kEtaSign[4] = {-1, -1, 1, 1};

Mat2 jacobian(const Mesh& mesh, int elem, const Vec2& xi) {
  const Eigen::Matrix<Real, 2, 4> dN = q1_shape_grad(xi);
  Mat2 J = Mat2::Zero();
  for (int a = 0; a < 4; ++a) J += mesh.nodes[mesh.quads[elem][a]] * dN.col(a).transpose();
  return J;
}

// Reference RT0 shapes per side with unit integrated outward flux:
// bottom, right, top, left of [-1,1]^2.
Vec2 rt0_ref(int side, const Vec2& xi) {
  switch (side) {
    case 0: return Vec2(0, (xi.y() - 1) / 4);
    case 1: return Vec2((1 + xi.x()) / 4, 0);
    case 2: return Vec2(0, (1 + xi.y()) / 4);
    default: return Vec2((xi.x() - 1) / 4, 0);
  }
}

// Enhanced reference strain modes (plane components).
Mat2 eas_ref_mode(int k, const Vec2& xi) {
  Mat2 m = Mat2::Zero();
  switch (k) {
    case 0: m(0, 0) = xi.x(); break;
    case 1: m(1, 1) = xi.y(); break;
    case 2: m(0, 1) = m(1, 0) = 0.5 * xi.x(); break;
    default: m(0, 1) = m(1, 0) = 0.5 * xi.y(); break;
  }
  return m;
}

}  // namespace

Vec4 q1_shape(const Vec2& xi) {
  Vec4 N;
  for (int a = 0; a < 4; ++a)
    N[a] = 0.25 * (1 + kXiSign[a] * xi.x()) * (1 + kEtaSign[a] * xi.y());
  return N;
}

Eigen::Matrix<Real, 2, 4> q1_shape_grad(const Vec2& xi) {
  Eigen::Matrix<Real, 2, 4> d;
  for (int a = 0; a < 4; ++a) {
    d(0, a) = 0.25 * kXiSign[a] * (1 + kEtaSign[a] * xi.y());
    d(1, a) = 0.25 * kEtaSign[a] * (1 + kXiSign[a] * xi.x());
  }
  return d;
}

const std::array<Vec2, 4>& gauss2x2() {
  static const Real g = 1.0 / std::sqrt(3.0);
  static const std::array<Vec2, 4> pts = {Vec2(-g, -g), Vec2(g, -g), Vec2(g, g), Vec2(-g, g)};
  return pts;
}

RT0Basis rt0_basis(const Mesh& mesh, int elem, const Vec2& xi) {
  const Mat2 J = jacobian(mesh, elem, xi);
  const Real detJ = J.determinant();
  if (detJ <= 0) throw AssemblyError("rt0_basis: degenerate Jacobian", elem);

  RT0Basis basis;
  for (int s = 0; s < 4; ++s) {
    const Real sign = mesh.elem_signs[elem][s];
    basis.values.col(s) = sign / detJ * (J * rt0_ref(s, xi));
    basis.div(0, s) = sign * 0.25 / detJ;
  }
  return basis;
}

SymTensor3 eas_strain(const Mesh& mesh, int elem, const Vec2& xi,
                      const Eigen::Matrix<Real, 8, 1>& nodal_u, const Vec4& enhanced) {
  const Mat2 J = jacobian(mesh, elem, xi);
  const Mat2 Jinv = J.inverse();
  const Eigen::Matrix<Real, 2, 4> dN = Jinv.transpose() * q1_shape_grad(xi);

  Mat2 grad_u = Mat2::Zero();
  for (int a = 0; a < 4; ++a) grad_u += nodal_u.segment<2>(2 * a) * dN.col(a).transpose();
  Mat2 eps2 = 0.5 * (grad_u + grad_u.transpose());

  const Mat2 J0 = jacobian(mesh, elem, Vec2::Zero());
  const Mat2 J0invT = J0.inverse().transpose();
  const Real ratio = J0.determinant() / J.determinant();
  for (int k = 0; k < 4; ++k)
    eps2 += enhanced[k] * ratio * (J0invT * eas_ref_mode(k, xi) * J0invT.transpose());

  return SymTensor3(eps2(0, 0), eps2(1, 1), 0.0, eps2(0, 1), 0.0, 0.0);
}

FemCache FemCache::build(const Mesh& mesh) {
  FemCache cache;
  cache.mesh = &mesh;
  cache.elems.resize(mesh.num_elems());

  const Real s2 = std::sqrt(2.0);
  for (int e = 0; e < mesh.num_elems(); ++e) {
    const Mat2 J0 = jacobian(mesh, e, Vec2::Zero());
    const Mat2 J0invT = J0.inverse().transpose();
    const Real detJ0 = J0.determinant();

    for (int q = 0; q < 4; ++q) {
      const Vec2 xi = gauss2x2()[q];
      QuadPointGeom& g = cache.elems[e].qp[q];

      const Mat2 J = jacobian(mesh, e, xi);
      const Real detJ = J.determinant();
      if (detJ <= 0) throw AssemblyError("FemCache: degenerate Jacobian", e);
      g.weight = detJ;  // Gauss weights are 1

      g.N = q1_shape(xi);
      g.dN = J.inverse().transpose() * q1_shape_grad(xi);
      g.x = Vec2::Zero();
      for (int a = 0; a < 4; ++a) g.x += g.N[a] * mesh.nodes[mesh.quads[e][a]];

      for (int a = 0; a < 4; ++a) {
        g.B(0, 2 * a) = g.dN(0, a);
        g.B(1, 2 * a + 1) = g.dN(1, a);
        g.B(3, 2 * a) = g.dN(1, a) / s2;
        g.B(3, 2 * a + 1) = g.dN(0, a) / s2;
      }

      const Real ratio = detJ0 / detJ;
      for (int k = 0; k < 4; ++k) {
        const Mat2 mode = ratio * (J0invT * eas_ref_mode(k, xi) * J0invT.transpose());
        g.G(0, k) = mode(0, 0);
        g.G(1, k) = mode(1, 1);
        g.G(3, k) = s2 * mode(0, 1);
      }

      const RT0Basis rt = rt0_basis(mesh, e, xi);
      g.Nq = rt.values;
      g.divq = rt.div;
    }
    cache.mean_char_length += mesh.char_length[e];
  }
  cache.mean_char_length /= std::max(1, mesh.num_elems());
  return cache;
}

}  // namespace porofrac::fem
