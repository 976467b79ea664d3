#include "porofrac/fracture.hpp"

namespace porofrac {

Degradation degradation(Real d) {
  return {(1 - d) * (1 - d), -2 * (1 - d), 2};
}

Real crack_density(Real d, const Vec3& grad_d, Real l) {
  if (l <= 0) throw ConfigError("crack_density: length scale must be positive");
  return 0.5 * d * d / l + 0.5 * l * grad_d.squaredNorm();
}

Real update_history(const PointState& state, Real psi_eff0_plus, Real psi_plast0, Real w_plast,
                    const MaterialParams& p) {
  const Real X = p.driving_force_mode == DrivingForceMode::HardeningEnergy ? psi_plast0 : w_plast;
  return std::max(state.history_H, ramp_pos(psi_eff0_plus + X - p.psi_c));
}

FractureKernel phase_field_kernel(Real d, const Vec3& grad_d, Real H, Real /*d_n*/,
                                  const MaterialParams& p) {
  if (H < 0) throw NumericalError("phase_field_kernel: negative history field");
  FractureKernel k;
  k.r_d = -2 * (1 - d) * H + 2 * p.psi_c * d;
  k.r_grad_d = 2 * p.psi_c * p.l * p.l * grad_d;
  k.k_dd = 2 * H + 2 * p.psi_c;
  k.k_grad = 2 * p.psi_c * p.l * p.l;
  return k;
}

}  // namespace porofrac
