#include "porofrac/material.hpp"

namespace porofrac {

void MaterialParams::validate() const {
  if (G < 0 || lambda < -2.0 / 3.0 * G)
    throw ConfigError("MaterialParams: need G >= 0 and lambda >= -2/3 G");
  if (M < 0 || b < 0 || b > 1) throw ConfigError("MaterialParams: need M >= 0 and 0 <= b <= 1");
  if (rho_f <= 0 || eta_f <= 0 || K < 0) throw ConfigError("MaterialParams: need rho_f, eta_f > 0 and K >= 0");
  if (l <= 0) throw ConfigError("MaterialParams: need l > 0");
  if (h < 0 || sigma_y < 0 || omega < 0 || q1 < 0 || psi_c < 0 || k < 0)
    throw ConfigError("MaterialParams: h, sigma_y, omega, q1, psi_c, k must be >= 0");
  if (eta_p <= 0) throw ConfigError("MaterialParams: need eta_p > 0");
  if (eps_interp < 0) throw ConfigError("MaterialParams: need eps_interp >= 0");
}

Real psi0_plast(Real alpha, const MaterialParams& p) {
  const Real quad = 0.5 * p.h * alpha * alpha;
  if (p.omega == 0) return quad;  // saturation term's omega -> 0 limit is zero
  return quad + p.sigma_y * (alpha + (std::exp(-p.omega * alpha) - 1.0) / p.omega);
}

Real psi_plast(Real alpha, Real d, const MaterialParams& p) {
  return p.degradation(d) * psi0_plast(alpha, p);
}

Real hardening_beta(Real alpha, Real d, const MaterialParams& p) {
  Real beta0 = p.h * alpha;
  if (p.omega != 0) beta0 += p.sigma_y * (1.0 - std::exp(-p.omega * alpha));
  return p.degradation(d) * beta0;
}

Real hardening_modulus0(Real alpha, const MaterialParams& p) {
  return p.h + p.sigma_y * p.omega * std::exp(-p.omega * alpha);
}

Real psi_fluid(const SymTensor3& eps_e, Real m_e, const MaterialParams& p) {
  const Real storage = p.b * eps_e.trace() - m_e / p.rho_f;
  return 0.5 * p.M * storage * storage;
}

Real fluid_pressure(const SymTensor3& eps_e, Real m_e, const MaterialParams& p) {
  return -p.M * (p.b * eps_e.trace() - m_e / p.rho_f);
}

Real total_energy(const PointState& state, const MaterialParams& p) {
  const SymTensor3 eps_e = state.eps_e();
  const SplitEnergy se = split_energy_and_stress(eps_e, p.lambda, p.G);
  return p.degradation(state.d) * se.psi_plus + se.psi_minus +
         psi_plast(state.alpha, state.d, p) + psi_fluid(eps_e, state.m_e(), p);
}

DrivingForces driving_forces(const PointState& state, const MaterialParams& p) {
  const SymTensor3 eps_e = state.eps_e();
  const SplitEnergy se = split_energy_and_stress(eps_e, p.lambda, p.G);
  const Real storage = p.b * eps_e.trace() - state.m_e() / p.rho_f;

  DrivingForces f;
  f.sigma = p.degradation(state.d) * se.sigma_plus + se.sigma_minus +
            (p.M * storage * p.b) * SymTensor3::Identity();
  f.beta = -hardening_beta(state.alpha, state.d, p);
  f.mu = -p.M / p.rho_f * storage;  // equals fluid_pressure / rho_f
  return f;
}

SymTensor3 permeability(const SymTensor3& eps, Real d, const Vec3& grad_d, Real L_perp,
                        const MaterialParams& p) {
  const Real dc = std::clamp(d, 0.0, 1.0);
  const Real f = std::pow(dc, p.eps_interp);
  const Real bulk = (1.0 - f) * p.rho_f * p.rho_f * p.K;
  SymTensor3 Kt = bulk * SymTensor3::Identity();

  const Real gnorm = grad_d.norm();
  if (f > 0 && gnorm >= detail::kGradFloor) {
    const Vec3 n = grad_d / gnorm;
    const Real w = fracture_opening(eps, grad_d, L_perp);
    const Real crack = f * p.rho_f * p.rho_f * w * w / (12.0 * p.eta_f);
    Kt += crack * (SymTensor3::Identity() - outer_sym<Real>(n));
  }
  return Kt;
}

Real fracture_opening(const SymTensor3& eps, const Vec3& grad_d, Real L_perp) {
  const Real gnorm = grad_d.norm();
  if (gnorm < detail::kGradFloor) return 0.0;
  const Vec3 n = grad_d / gnorm;
  // Compressive normal strain is clamped so w^2 never rewards interpenetration.
  return ramp_pos(normal_projection(eps, n)) * L_perp;
}

}  // namespace porofrac
