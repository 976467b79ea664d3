#pragma once

#include "porofrac/material.hpp"

namespace porofrac {

using Vec7 = Eigen::Matrix<Real, 7, 1>;
using Vec8 = Eigen::Matrix<Real, 8, 1>;
using Mat7 = Eigen::Matrix<Real, 7, 7>;
using Mat8 = Eigen::Matrix<Real, 8, 8>;

/// Drucker-Prager-type yield function with friction hardening,
///   f = sqrt(3/2) sqrt(|dev sigma|^2 + M_phi^2 q1^2)
///       - M_phi (s_max - tr sigma / 3 - b rho_f mu) + beta M_h,
///   M_h = 1 - sqrt(3/2) q1 exp(tr sigma / 3 + b rho_f mu - s_max),
/// with analytic first and second derivatives over (sigma, mu, beta).
/// The Hessian is an 8x8 block over (sigma in Mandel form, mu, beta).
struct YieldEval {
  Real value = 0;
  SymTensor3 d_sigma;
  Real d_mu = 0;
  Real d_beta = 0;
  Mat8 hessian = Mat8::Zero();
  bool exp_saturated = false;  ///< exponent was clamped (far outside the apex)
};

YieldEval yield_function(const DrivingForces& F, const MaterialParams& p);

/// Yield function of the drained solid skeleton, f_solid(sigma_eff, beta).
/// Identical to yield_function after the substitution
/// sigma = sigma_eff - b rho_f mu I (the mu dependence cancels); kept as a
/// consistency check, not used in the hot path.
Real yield_from_effective(const SymTensor3& sigma_eff, Real beta, const MaterialParams& p);

/// Result of the local return mapping at one material point.
struct ReturnMapResult {
  SymTensor3 eps_p;
  Real alpha = 0;
  Real m_p = 0;
  Real gamma_v = 0;               ///< incremental visco-plastic multiplier >= 0
  SymTensor3 sigma;               ///< total stress psi_{,eps}
  Real dpsi_dm = 0;               ///< psi_{,m} (the fluid potential mu)
  Mat8 tangent_full = Mat8::Zero();  ///< consistent moduli over (eps, m, alpha slot)
  Mat7 tangent_ep = Mat7::Zero();    ///< (eps, m) block used by assembly
  Real plastic_work_increment = 0;   ///< sigma0 : d(eps_p) + mu d(m_p)
  Real psi0_plus = 0;             ///< undamaged tensile energy at the converged eps_e
  bool elastic = true;
  bool converged = true;
  int iterations = 0;
  Real residual = 0;
};

/// Visco-plastic return mapping. `trial` carries the current totals (eps, m)
/// and the time-n internal variables (eps_p, alpha, m_p); `d` is the frozen
/// phase field of the one-pass split. Throws ConvergenceError after
/// `max_iter` iterations and NumericalError on NaN iterates.
ReturnMapResult return_map(const PointState& trial, Real d, Real tau, const MaterialParams& p,
                           int max_iter = 50, Real tol = 1e-10);

/// Stress, fluid dual and elastic moduli at the state's internal variables
/// with plastic flow suppressed (for assemblies over a frozen plastic state).
ReturnMapResult frozen_evaluate(const PointState& state, Real d, const MaterialParams& p);

/// Plastic work increment sigma0 : d(eps_p) + mu d(m_p) from one converged
/// step; F must carry the undamaged total stress sigma0 and the fluid
/// potential mu at the end of the step.
Real plastic_work_increment(const DrivingForces& F, const SymTensor3& d_eps_p, Real d_m_p);

/// Duals evaluated with the degradation factor divided out of the elastic
/// part (undamaged total stress sigma0); used for the plastic-work driving
/// force.
DrivingForces undamaged_driving_forces(const PointState& state, const MaterialParams& p);

namespace detail {
// Exponent clamp for M_h; beyond this the yield evaluation is flagged.
inline constexpr Real kYieldExpClamp = 60.0;
}  // namespace detail

}  // namespace porofrac
