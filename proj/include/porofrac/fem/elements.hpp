#pragma once

#include "porofrac/fem/dofmap.hpp"

namespace porofrac::fem {

using Vec4 = Eigen::Matrix<Real, 4, 1>;
using Mat4 = Eigen::Matrix<Real, 4, 4>;
using MatB = Eigen::Matrix<Real, 4, 8>;   ///< Mandel strain rows (xx, yy, zz, s2*xy)
using MatG = Eigen::Matrix<Real, 4, 4>;   ///< enhanced-strain modes
using MatNq = Eigen::Matrix<Real, 2, 4>;  ///< RT0 vector values per side

/// Q1 shape values at a reference point.
Vec4 q1_shape(const Vec2& xi);
/// Q1 shape gradients in reference coordinates (2 x 4).
Eigen::Matrix<Real, 2, 4> q1_shape_grad(const Vec2& xi);

/// 2x2 Gauss rule on [-1,1]^2 (weights are all 1).
const std::array<Vec2, 4>& gauss2x2();

/// Lowest-order Raviart-Thomas basis on a quadrilateral, contravariant
/// Piola mapped, with the element's orientation signs applied so that dof k
/// is the integrated flux along the global normal of edge k. Divergence is
/// constant per basis function on affine elements.
struct RT0Basis {
  MatNq values;                     ///< physical vector value per side
  Eigen::Matrix<Real, 1, 4> div;   ///< physical divergence per side
};
RT0Basis rt0_basis(const Mesh& mesh, int elem, const Vec2& xi);

/// Strain from nodal displacements plus the four condensed enhanced modes,
/// eps = sym grad u + eps_enhanced; the enhanced field has zero element
/// mean, which is the patch-test condition.
SymTensor3 eas_strain(const Mesh& mesh, int elem, const Vec2& xi,
                      const Eigen::Matrix<Real, 8, 1>& nodal_u, const Vec4& enhanced);

/// Precomputed geometry factors at the quadrature points of one element.
struct QuadPointGeom {
  Real weight = 0;  ///< Gauss weight times Jacobian determinant
  MatB B = MatB::Zero();
  MatG G = MatG::Zero();
  MatNq Nq = MatNq::Zero();
  Eigen::Matrix<Real, 1, 4> divq = Eigen::Matrix<Real, 1, 4>::Zero();
  Vec4 N = Vec4::Zero();
  Eigen::Matrix<Real, 2, 4> dN = Eigen::Matrix<Real, 2, 4>::Zero();
  Vec2 x = Vec2::Zero();
};

struct ElementGeom {
  std::array<QuadPointGeom, 4> qp;
};

/// Mesh-wide cache of element geometry; built once, shared by assemblies.
struct FemCache {
  const Mesh* mesh = nullptr;
  std::vector<ElementGeom> elems;
  Real mean_char_length = 0;

  static FemCache build(const Mesh& mesh);
};

}  // namespace porofrac::fem
