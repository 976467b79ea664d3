#pragma once

#include "porofrac/tensors.hpp"

namespace porofrac {

/// Which energy drives the crack via the history field: the stored hardening
/// energy psi0_plast, or the accumulated plastic work w_plast.
enum class DrivingForceMode { HardeningEnergy, PlasticWork };

/// All constitutive constants. Stresses/moduli in MN/m^2, lengths in m,
/// times in s, fluid content in kg/m^3; the permeability composite
/// rho_f^2 K carries the tabulated values verbatim.
struct MaterialParams {
  // Elasticity
  Real lambda = 0;        ///< Lame parameter (MN/m^2)
  Real G = 0;             ///< shear modulus (MN/m^2)
  // Plastic hardening
  Real h = 0;             ///< hardening modulus (MN/m^2)
  Real sigma_y = 0;       ///< saturated yield shift (MN/m^2)
  Real omega = 0;         ///< saturation parameter (-)
  Real eta_p = 1e-6;      ///< plastic viscosity (s)
  // Yield surface
  Real q1 = 0;            ///< apex perturbation (MN/m^2)
  Real M_phi = 0;         ///< friction slope (-)
  Real s_max = 0;         ///< cone apex position (MN/m^2)
  // Fluid
  Real M = 0;             ///< Biot's modulus (MN/m^2)
  Real b = 0;             ///< Biot's coefficient (-)
  Real eta_f = 1e-3;      ///< fluid dynamic viscosity (Ns/m^2)
  Real K = 0;             ///< spatial permeability (m^3 s/kg)
  Real rho_f = 1000;      ///< fluid density (kg/m^3)
  // Fracture
  Real psi_c = 0;         ///< crack driving threshold (MN/m^2)
  Real l = 1;             ///< phase-field length scale (m)
  Real k = 0;             ///< residual stiffness (-)
  Real eps_interp = 50;   ///< exponent in f(d) = d^eps
  DrivingForceMode driving_force_mode = DrivingForceMode::HardeningEnergy;

  /// Throws ConfigError on violated parameter bounds.
  void validate() const;

  Real degradation(Real d) const { return (1 - d) * (1 - d) + k; }
};

/// Per-quadrature-point constitutive state. For the return map, eps/m carry
/// the current totals while eps_p/alpha/m_p carry the time-n internal
/// variables; the FE layer keeps a committed copy per point.
struct PointState {
  SymTensor3 eps;
  Real m = 0;
  Real d = 0;
  Vec3 grad_d = Vec3::Zero();
  SymTensor3 eps_p;
  Real alpha = 0;
  Real m_p = 0;
  Real history_H = 0;
  Real w_plast = 0;

  SymTensor3 eps_e() const { return eps - eps_p; }
  Real m_e() const { return m - m_p; }
};

/// Thermodynamic duals of (eps_p, alpha, m_p): total stress, hardening dual
/// and fluid potential. beta = -d(psi)/d(alpha) is <= 0 under hardening;
/// mu = p/rho_f.
struct DrivingForces {
  SymTensor3 sigma;
  Real beta = 0;
  Real mu = 0;
};

/// Plastic energy density [g(d)+k] psi0_plast(alpha) with saturation
/// hardening; omega = 0 degenerates to pure quadratic hardening.
Real psi_plast(Real alpha, Real d, const MaterialParams& p);

/// Undamaged part psi0_plast(alpha).
Real psi0_plast(Real alpha, const MaterialParams& p);

/// Hardening function d(psi_plast)/d(alpha) = [g(d)+k] (h a + sigma_y (1 - exp(-w a))).
Real hardening_beta(Real alpha, Real d, const MaterialParams& p);

/// Undamaged hardening modulus d2(psi0_plast)/d(alpha)^2.
Real hardening_modulus0(Real alpha, const MaterialParams& p);

/// Biot storage energy M/2 [b tr(eps_e) - m_e/rho_f]^2.
Real psi_fluid(const SymTensor3& eps_e, Real m_e, const MaterialParams& p);

/// Fluid pressure p = rho_f d(psi_fluid)/dm = -M [b tr(eps_e) - m_e/rho_f].
Real fluid_pressure(const SymTensor3& eps_e, Real m_e, const MaterialParams& p);

/// Full energy density of a state at its phase field d.
Real total_energy(const PointState& state, const MaterialParams& p);

/// Duals of the internal variables at a state.
DrivingForces driving_forces(const PointState& state, const MaterialParams& p);

/// Anisotropic permeability tensor
///   K(eps,d,grad d) = [1-f(d)] rho_f^2 K I + f(d) rho_f^2 w^2/(12 eta_f) (I - n(x)n)
/// with f(d) = d^eps on d clamped to [0,1]. Below the gradient floor the
/// crack term is dropped.
SymTensor3 permeability(const SymTensor3& eps, Real d, const Vec3& grad_d, Real L_perp,
                        const MaterialParams& p);

/// Crack opening w = <n . eps . n>_+ L_perp; w = 0 at vanishing gradient.
Real fracture_opening(const SymTensor3& eps, const Vec3& grad_d, Real L_perp);

namespace detail {
// |grad d| below this has no meaningful crack normal (1/m).
inline constexpr Real kGradFloor = 1e-8;
}  // namespace detail

}  // namespace porofrac
