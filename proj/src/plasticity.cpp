#include "porofrac/plasticity.hpp"

namespace porofrac {

namespace {

const Real kSqrt32 = std::sqrt(1.5);

Vec6 identity_mandel() { return SymTensor3::Identity().mandel(); }

}  // namespace

YieldEval yield_function(const DrivingForces& F, const MaterialParams& p) {
  YieldEval y;
  const Vec6 sm = F.sigma.mandel();
  const Vec6 im = identity_mandel();
  const Real tr = F.sigma.trace();
  const Vec6 devm = sm - tr / 3.0 * im;
  const Real dev2 = devm.squaredNorm();
  const Real R = std::sqrt(dev2 + p.M_phi * p.M_phi * p.q1 * p.q1);
  const Real c = p.b * p.rho_f;

  Real arg = tr / 3.0 + c * F.mu - p.s_max;
  if (arg > detail::kYieldExpClamp) {
    arg = detail::kYieldExpClamp;
    y.exp_saturated = true;
  }
  const Real E = std::exp(arg);
  const Real Mh = 1.0 - kSqrt32 * p.q1 * E;
  // dMh/d(arg); frozen once the clamp engages so derivatives stay consistent.
  const Real dMh = y.exp_saturated ? 0.0 : -kSqrt32 * p.q1 * E;

  y.value = kSqrt32 * R - p.M_phi * (p.s_max - tr / 3.0 - c * F.mu) + F.beta * Mh;

  Vec6 df_ds = p.M_phi / 3.0 * im + F.beta * dMh / 3.0 * im;
  Mat8& H = y.hessian;
  if (R > 0) {
    df_ds += kSqrt32 / R * devm;
    const Mat6 Pdev = Mat6::Identity() - im * im.transpose() / 3.0;
    H.block<6, 6>(0, 0) = kSqrt32 * (Pdev / R - devm * devm.transpose() / (R * R * R));
  }
  H.block<6, 6>(0, 0) += F.beta * dMh / 9.0 * (im * im.transpose());
  H.block<6, 1>(0, 6) = F.beta * dMh * c / 3.0 * im;
  H.block<1, 6>(6, 0) = H.block<6, 1>(0, 6).transpose();
  H.block<6, 1>(0, 7) = dMh / 3.0 * im;
  H.block<1, 6>(7, 0) = H.block<6, 1>(0, 7).transpose();
  H(6, 6) = F.beta * dMh * c * c;
  H(6, 7) = H(7, 6) = dMh * c;
  H(7, 7) = 0;

  y.d_sigma = SymTensor3::from_mandel(df_ds);
  y.d_mu = p.M_phi * c + F.beta * dMh * c;
  y.d_beta = Mh;
  return y;
}

Real yield_from_effective(const SymTensor3& sigma_eff, Real beta, const MaterialParams& p) {
  const Invariants inv = invariants(sigma_eff);
  const Real R = std::sqrt(inv.dev_norm * inv.dev_norm + p.M_phi * p.M_phi * p.q1 * p.q1);
  const Real arg = std::min(inv.trace / 3.0 - p.s_max, detail::kYieldExpClamp);
  const Real Mh = 1.0 - kSqrt32 * p.q1 * std::exp(arg);
  return kSqrt32 * R - p.M_phi * (p.s_max - inv.trace / 3.0) + beta * Mh;
}

DrivingForces undamaged_driving_forces(const PointState& state, const MaterialParams& p) {
  const SymTensor3 eps_e = state.eps_e();
  const SplitEnergy se = split_energy_and_stress(eps_e, p.lambda, p.G);
  const Real storage = p.b * eps_e.trace() - state.m_e() / p.rho_f;
  MaterialParams undamaged = p;
  undamaged.k = 0;
  DrivingForces f;
  f.sigma = se.sigma_plus + se.sigma_minus + (p.M * storage * p.b) * SymTensor3::Identity();
  f.beta = -hardening_beta(state.alpha, 0.0, undamaged);
  f.mu = -p.M / p.rho_f * storage;
  return f;
}

Real plastic_work_increment(const DrivingForces& F, const SymTensor3& d_eps_p, Real d_m_p) {
  return F.sigma.ddot(d_eps_p) + F.mu * d_m_p;
}

namespace {

// Generalized elastic state (eps_e, m_e, alpha) with the energy derivatives
// of Box 1 step 2: s = [psi_{,eps_e}; psi_{,m_e}; psi_{,alpha}] and the
// Hessian E over the same slots. The yield function is evaluated at
// (sigma = s_eps, mu = s_m, beta = -s_alpha); its gradient/Hessian transform
// accordingly (the alpha slot flips sign).
struct LocalEval {
  Vec8 s = Vec8::Zero();
  Mat8 E = Mat8::Zero();
  YieldEval yield;
  Vec8 n = Vec8::Zero();        // flow direction in slot variables
  Mat8 Fh = Mat8::Zero();       // yield Hessian in slot variables
  Real psi0_plus = 0;
};

LocalEval evaluate(const SymTensor3& eps_e, Real m_e, Real alpha, Real d,
                   const MaterialParams& p) {
  LocalEval ev;
  const SplitEnergy se = split_energy_and_stress(eps_e, p.lambda, p.G);
  const Real gk = p.degradation(d);
  const Real storage = p.b * eps_e.trace() - m_e / p.rho_f;
  const Vec6 im = identity_mandel();

  const SymTensor3 sigma = gk * se.sigma_plus + se.sigma_minus +
                           (p.M * storage * p.b) * SymTensor3::Identity();
  ev.s.head<6>() = sigma.mandel();
  ev.s[6] = -p.M / p.rho_f * storage;
  ev.s[7] = hardening_beta(alpha, d, p);
  ev.psi0_plus = se.psi_plus;

  ev.E.block<6, 6>(0, 0) = gk * se.tangent_plus + se.tangent_minus +
                           p.M * p.b * p.b * (im * im.transpose());
  ev.E.block<6, 1>(0, 6) = -p.M * p.b / p.rho_f * im;
  ev.E.block<1, 6>(6, 0) = ev.E.block<6, 1>(0, 6).transpose();
  ev.E(6, 6) = p.M / (p.rho_f * p.rho_f);
  ev.E(7, 7) = gk * hardening_modulus0(alpha, p);

  DrivingForces F;
  F.sigma = sigma;
  F.mu = ev.s[6];
  F.beta = -ev.s[7];
  ev.yield = yield_function(F, p);

  ev.n.head<6>() = ev.yield.d_sigma.mandel();
  ev.n[6] = ev.yield.d_mu;
  ev.n[7] = -ev.yield.d_beta;
  ev.Fh = ev.yield.hessian;
  ev.Fh.row(7) *= -1;
  ev.Fh.col(7) *= -1;
  return ev;
}

}  // namespace

ReturnMapResult frozen_evaluate(const PointState& state, Real d, const MaterialParams& p) {
  const LocalEval ev = evaluate(state.eps_e(), state.m_e(), state.alpha, d, p);
  ReturnMapResult res;
  res.eps_p = state.eps_p;
  res.alpha = state.alpha;
  res.m_p = state.m_p;
  res.sigma = SymTensor3::from_mandel(Vec6(ev.s.head<6>()));
  res.dpsi_dm = ev.s[6];
  res.tangent_full = ev.E;
  res.tangent_ep = ev.E.topLeftCorner<7, 7>();
  res.psi0_plus = ev.psi0_plus;
  return res;
}

ReturnMapResult return_map(const PointState& trial, Real d, Real tau, const MaterialParams& p,
                           int max_iter, Real tol) {
  if (tau <= 0) throw ConfigError("return_map: tau must be positive");

  ReturnMapResult res;
  res.eps_p = trial.eps_p;
  res.alpha = trial.alpha;
  res.m_p = trial.m_p;

  // Internal unknowns q = (eps_p, m_p, -alpha); the generalized elastic
  // state is then (eps, m, 0) - q and the discrete flow rule reads
  // q = q_n + gamma n.
  Vec8 z = Vec8::Zero();
  z.head<6>() = trial.eps.mandel();
  z[6] = trial.m;
  Vec8 qn;
  qn.head<6>() = trial.eps_p.mandel();
  qn[6] = trial.m_p;
  qn[7] = -trial.alpha;
  Vec8 q = qn;
  Real gamma = 0;

  const auto eval_at = [&](const Vec8& qv) {
    const SymTensor3 eps_e = SymTensor3::from_mandel(Vec6(z.head<6>() - qv.head<6>()));
    return evaluate(eps_e, z[6] - qv[6], -qv[7], d, p);
  };

  LocalEval ev = eval_at(q);
  if (ev.yield.value < 0) {
    res.elastic = true;
    res.converged = true;
    res.sigma = SymTensor3::from_mandel(Vec6(ev.s.head<6>()));
    res.dpsi_dm = ev.s[6];
    res.tangent_full = ev.E;
    res.tangent_ep = ev.E.topLeftCorner<7, 7>();
    res.psi0_plus = ev.psi0_plus;
    return res;
  }

  res.elastic = false;
  const Real visc = p.eta_p / tau;

  // Damped Newton on (q, gamma) at a given viscous coefficient. Returns the
  // iteration count on success, -1 on stagnation.
  const auto newton_solve = [&](Real vc, Vec8& qv, Real& gv, LocalEval& evv, Real& rnorm) -> int {
    const auto residual_norm = [&](const LocalEval& e, const Vec8& qq, Real g) {
      const Vec8 rv = qn - qq + g * e.n;
      const Real rf = e.yield.value - vc * g;
      return std::sqrt(rv.squaredNorm() + rf * rf);
    };
    for (int it = 0; it <= max_iter; ++it) {
      const Vec8 rv = qn - qv + gv * evv.n;
      const Real rf = evv.yield.value - vc * gv;
      rnorm = std::sqrt(rv.squaredNorm() + rf * rf);
      if (!std::isfinite(rnorm))
        throw NumericalError("return_map: non-finite residual in local Newton");
      if (rnorm < tol) return it;
      if (it == max_iter) return -1;

      const Mat8 A = Mat8::Identity() + gv * evv.Fh * evv.E;
      const Eigen::PartialPivLU<Mat8> lu(A);
      const Vec8 Ainv_r = lu.solve(rv);
      const Vec8 Ainv_n = lu.solve(evv.n);
      const Vec8 Xr = evv.E * Ainv_r;
      const Vec8 Xn = evv.E * Ainv_n;
      const Real C = evv.n.dot(Xn) + vc;
      const Real dgamma = (rf - evv.n.dot(Xr)) / C;
      const Vec8 dq = Ainv_r + dgamma * Ainv_n;

      // Backtracking on the combined residual keeps the iteration stable
      // when the trial sits far outside the yield surface; full steps are
      // accepted near the solution.
      Real step = 1.0;
      Vec8 q_new;
      Real gamma_new;
      LocalEval ev_new;
      for (int ls = 0;; ++ls) {
        q_new = qv + step * dq;
        gamma_new = std::max(gv + step * dgamma, Real(0));
        ev_new = eval_at(q_new);
        const Real rnew = residual_norm(ev_new, q_new, gamma_new);
        if (std::isfinite(rnew) && rnew < rnorm) break;
        if (ls >= 12) break;
        step *= 0.5;
      }
      qv = q_new;
      gv = gamma_new;
      evv = ev_new;
    }
    return -1;
  };

  int it = newton_solve(visc, q, gamma, ev, res.residual);
  if (it < 0) {
    // Viscosity continuation: a stiffer penalty pins the solution near the
    // trial state and is easy to solve; walking it back down to the true
    // value warm-starts each stage with the previous root. The final stage
    // solves the exact problem, so converged results are unaffected.
    q = qn;
    gamma = 0;
    ev = eval_at(q);
    bool ok = true;
    for (int j = 16; j >= 0; --j) {
      const Real vc = visc * std::pow(2.0, j);
      if (newton_solve(vc, q, gamma, ev, res.residual) < 0) {
        ok = false;
        break;
      }
    }
    if (!ok)
      throw ConvergenceError("return_map: local Newton did not converge", res.residual, max_iter);
    it = max_iter;
  }
  res.iterations = it;
  res.converged = true;
  res.gamma_v = gamma;
  res.eps_p = SymTensor3::from_mandel(Vec6(q.head<6>()));
  res.alpha = -q[7];
  // The flow rule makes m_p track volumetric plastic strain exactly; commit
  // the identity rather than its Newton approximation.
  res.m_p = trial.m_p + p.rho_f * p.b * (res.eps_p.trace() - trial.eps_p.trace());
  q[6] = res.m_p;
  ev = eval_at(q);

  res.sigma = SymTensor3::from_mandel(Vec6(ev.s.head<6>()));
  res.dpsi_dm = ev.s[6];
  res.psi0_plus = ev.psi0_plus;

  // Consistent moduli E_ep = X - (X n)(X n)^T / C with X = E (I + gamma F E)^{-1}.
  const Mat8 A = Mat8::Identity() + gamma * ev.Fh * ev.E;
  const Mat8 X = ev.E * A.lu().solve(Mat8::Identity());
  const Vec8 Xn = X * ev.n;
  const Real C = ev.n.dot(Xn) + visc;
  Mat8 Eep = X - Xn * Xn.transpose() / C;
  const Real asym = (Eep - Eep.transpose()).norm();
  if (asym > 1e-10 * std::max(Real(1), Eep.norm()))
    throw NumericalError("return_map: consistent tangent lost symmetry");
  Eep = 0.5 * (Eep + Eep.transpose());
  res.tangent_full = Eep;
  res.tangent_ep = Eep.topLeftCorner<7, 7>();

  // End-of-step plastic work increment from the undamaged duals.
  PointState converged_state = trial;
  converged_state.eps_p = res.eps_p;
  converged_state.alpha = res.alpha;
  converged_state.m_p = res.m_p;
  converged_state.d = d;
  const DrivingForces F0 = undamaged_driving_forces(converged_state, p);
  res.plastic_work_increment =
      plastic_work_increment(F0, res.eps_p - trial.eps_p, res.m_p - trial.m_p);
  return res;
}

}  // namespace porofrac
