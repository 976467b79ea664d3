#pragma once

#include "porofrac/material.hpp"

namespace porofrac {

/// Degradation g(d) = (1-d)^2 with first and second derivative.
struct Degradation {
  Real g;
  Real dg;
  Real ddg;
};

Degradation degradation(Real d);

/// Regularized crack surface density d^2/(2l) + l/2 |grad d|^2.
Real crack_density(Real d, const Vec3& grad_d, Real l);

/// Crack driving history update
///   H_new = max(H_old, < psi0_eff_plus + X - psi_c >_+)
/// where X is psi0_plast or w_plast depending on the driving-force mode.
/// Only the tensile elastic part enters.
Real update_history(const PointState& state, Real psi_eff0_plus, Real psi_plast0, Real w_plast,
                    const MaterialParams& p);

/// Phase-field residual/tangent densities at one quadrature point:
///   r_d      = -2 (1-d) H + 2 psi_c d
///   r_grad_d = 2 psi_c l^2 grad d
/// with tangents 2H + 2 psi_c and 2 psi_c l^2. The kernel is quadratic in d,
/// so one Newton step solves the phase-field system exactly.
struct FractureKernel {
  Real r_d = 0;
  Vec3 r_grad_d = Vec3::Zero();
  Real k_dd = 0;
  Real k_grad = 0;
};

/// d_n enters the step only through the post-solve clamp d <- max(d, d_n);
/// the residual rows themselves do not depend on it.
FractureKernel phase_field_kernel(Real d, const Vec3& grad_d, Real H, Real d_n,
                                  const MaterialParams& p);

}  // namespace porofrac
