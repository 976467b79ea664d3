#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/oracles.hpp"

using namespace porofrac;
using namespace porofrac::testing;

namespace {

DrivingForces random_admissible_forces(Rng& rng, const MaterialParams& p, Real stress_scale) {
  std::uniform_real_distribution<Real> u(-1, 1);
  DrivingForces F;
  F.sigma = random_plane_tensor(rng, stress_scale);
  F.mu = stress_scale / p.rho_f * u(rng);
  F.beta = -std::abs(u(rng)) * 0.1;
  return F;
}

// Trial state with a deviatoric strain large enough to yield under the
// given parameters.
PointState yielding_trial(const MaterialParams& p, Real shear) {
  PointState s;
  s.eps = SymTensor3(0, 0, 0, shear, 0, 0);
  return s;
}

}  // namespace

TEST_CASE("yield value at the origin, injection parameters") {
  const MaterialParams p = injection_params();
  DrivingForces F;
  const YieldEval y = yield_function(F, p);
  const Real expected = std::sqrt(1.5) * p.M_phi * p.q1 - p.M_phi * p.s_max;
  CHECK(y.value == doctest::Approx(expected).epsilon(1e-12));
  CHECK(y.value == doctest::Approx(-3.5559e-3).epsilon(1e-4));
  CHECK(y.value < 0);  // elastic at zero stress
}

TEST_CASE("unregularized apex lies on the yield surface") {
  MaterialParams p = injection_params();
  p.q1 = 0;
  DrivingForces F;
  F.sigma = p.s_max * SymTensor3::Identity();
  const YieldEval y = yield_function(F, p);
  CHECK(y.value == doctest::Approx(0.0));
}

TEST_CASE("yield gradient and Hessian match finite differences") {
  const MaterialParams p = injection_params();
  Rng rng(31);
  const Real h = 1e-7;
  for (int i = 0; i < 1000; ++i) {
    const DrivingForces F = random_admissible_forces(rng, p, 1e-2);
    const YieldEval y = yield_function(F, p);

    const SymTensor3 fd_sigma = fd_tensor_derivative(
        [&](const SymTensor3& s) {
          DrivingForces G = F;
          G.sigma = s;
          return yield_function(G, p).value;
        },
        F.sigma, h);
    CHECK((fd_sigma - y.d_sigma).norm() / std::max(1.0, y.d_sigma.norm()) < 1e-5);

    const Real fd_mu = fd_scalar_derivative(
        [&](Real m) {
          DrivingForces G = F;
          G.mu = m;
          return yield_function(G, p).value;
        },
        F.mu, h);
    CHECK(y.d_mu == doctest::Approx(fd_mu).epsilon(1e-5));

    const Real fd_beta = fd_scalar_derivative(
        [&](Real b) {
          DrivingForces G = F;
          G.beta = b;
          return yield_function(G, p).value;
        },
        F.beta, h);
    CHECK(y.d_beta == doctest::Approx(fd_beta).epsilon(1e-5));

    // Hessian columns via FD of the gradient, Mandel directions.
    if (i % 20 == 0) {
      Mat8 fd_h = Mat8::Zero();
      const auto grad8 = [&](const DrivingForces& G) {
        const YieldEval e = yield_function(G, p);
        Vec8 g;
        g.head<6>() = e.d_sigma.mandel();
        g[6] = e.d_mu;
        g[7] = e.d_beta;
        return g;
      };
      for (int j = 0; j < 8; ++j) {
        DrivingForces Gp = F, Gm = F;
        if (j < 6) {
          Vec6 dm = Vec6::Zero();
          dm[j] = h;
          Gp.sigma = F.sigma + SymTensor3::from_mandel(dm);
          Gm.sigma = F.sigma - SymTensor3::from_mandel(dm);
        } else if (j == 6) {
          Gp.mu += h;
          Gm.mu -= h;
        } else {
          Gp.beta += h;
          Gm.beta -= h;
        }
        fd_h.col(j) = (grad8(Gp) - grad8(Gm)) / (2 * h);
      }
      CHECK((fd_h - y.hessian).norm() / std::max(1.0, y.hessian.norm()) < 1e-5);
    }
  }
}

TEST_CASE("yield function is convex in sigma at fixed mu and beta") {
  const MaterialParams p = injection_params();
  Rng rng(32);
  for (int i = 0; i < 1000; ++i) {
    DrivingForces F = random_admissible_forces(rng, p, 1e-3);
    if (i % 2) F.beta = 0;  // edge case of the admissible range beta <= 0
    const YieldEval y = yield_function(F, p);
    const Mat6 Hs = y.hessian.topLeftCorner<6, 6>();
    Eigen::SelfAdjointEigenSolver<Mat6> es(Hs);
    CHECK(es.eigenvalues().minCoeff() > -1e-10 * std::max(1.0, Hs.norm()));
  }
}

TEST_CASE("effective-stress yield equals total-stress yield after substitution") {
  const MaterialParams p = injection_params();
  Rng rng(33);
  std::uniform_real_distribution<Real> u(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    const SymTensor3 sigma_eff = random_plane_tensor(rng, 1e-2);
    const Real beta = -std::abs(u(rng)) * 0.05;
    const Real mu = u(rng) * 1e-5;
    DrivingForces F;
    F.sigma = sigma_eff - p.b * p.rho_f * mu * SymTensor3::Identity();
    F.beta = beta;
    F.mu = mu;
    const Real direct = yield_from_effective(sigma_eff, beta, p);
    const Real subst = yield_function(F, p).value;
    CHECK(direct == doctest::Approx(subst).epsilon(1e-12));
  }
  // mu = 0: both definitions coincide trivially
  const SymTensor3 s = SymTensor3::diag(1e-3, -2e-3, 0);
  DrivingForces F;
  F.sigma = s;
  CHECK(yield_from_effective(s, 0.0, p) == doctest::Approx(yield_function(F, p).value).epsilon(1e-14));
}

TEST_CASE("purely deviatoric effective stress: yield independent of mu") {
  const MaterialParams p = injection_params();
  const SymTensor3 dev = SymTensor3(1e-3, -1e-3, 0, 5e-4, 0, 0);
  for (Real mu : {-1e-4, 0.0, 1e-4, 3e-3}) {
    DrivingForces F;
    F.sigma = dev - p.b * p.rho_f * mu * SymTensor3::Identity();
    F.mu = mu;
    CHECK(yield_function(F, p).value ==
          doctest::Approx(yield_from_effective(dev, 0.0, p)).epsilon(1e-12));
  }
}

TEST_CASE("elastic trial returns unchanged state with elastic moduli") {
  const MaterialParams p = footing_params();
  PointState trial;
  trial.eps = SymTensor3::diag(1e-6, -1e-6, 0);
  trial.m = 1e-4;
  const ReturnMapResult r = return_map(trial, 0.0, 1e-3, p);
  CHECK(r.elastic);
  CHECK(r.gamma_v == 0.0);
  CHECK((r.eps_p - trial.eps_p).norm() == 0.0);
  CHECK(r.alpha == trial.alpha);
  CHECK(r.m_p == trial.m_p);
  CHECK(r.plastic_work_increment == 0.0);

  // Moduli equal the elastic Hessian: verify against finite differences.
  const Real h = 1e-9;
  for (int j = 0; j < 7; ++j) {
    PointState tp = trial, tm = trial;
    if (j < 6) {
      Vec6 dm = Vec6::Zero();
      dm[j] = h;
      tp.eps += SymTensor3::from_mandel(dm);
      tm.eps -= SymTensor3::from_mandel(dm);
    } else {
      tp.m += h;
      tm.m -= h;
    }
    const ReturnMapResult rp = return_map(tp, 0.0, 1e-3, p);
    const ReturnMapResult rm = return_map(tm, 0.0, 1e-3, p);
    Vec7 fd;
    fd.head<6>() = (rp.sigma.mandel() - rm.sigma.mandel()) / (2 * h);
    fd[6] = (rp.dpsi_dm - rm.dpsi_dm) / (2 * h);
    CHECK((fd - r.tangent_ep.col(j)).norm() / std::max(1.0, r.tangent_ep.col(j).norm()) < 1e-4);
  }
}

TEST_CASE("drained shear with no hardening converges onto the viscous yield surface") {
  MaterialParams p = injection_params();
  p.q1 = 0;
  p.h = 0;
  p.sigma_y = 0;
  p.b = 0;
  p.M = 0;
  const Real tau = 1e-3;
  const PointState trial = yielding_trial(p, 5e-4);

  const ReturnMapResult r = return_map(trial, 0.0, tau, p);
  CHECK(!r.elastic);
  CHECK(r.converged);
  CHECK(r.gamma_v > 0.0);

  // Converged state satisfies f = (eta_p / tau) gamma.
  PointState out = trial;
  out.eps_p = r.eps_p;
  out.alpha = r.alpha;
  out.m_p = r.m_p;
  const DrivingForces F = driving_forces(out, p);
  const Real f = yield_function(F, p).value;
  CHECK(std::abs(f - p.eta_p / tau * r.gamma_v) < 1e-10);

  // Independent dense KKT solve agrees.
  const KktSolution kkt = kkt_return_map(trial, 0.0, tau, p, 200, 1e-9);
  CHECK(kkt.converged);
  CHECK((kkt.eps_p - r.eps_p).norm() < 1e-6 * std::max(1e-6, r.eps_p.norm()));
  CHECK(kkt.alpha == doctest::Approx(r.alpha).epsilon(1e-5));
  CHECK(kkt.gamma == doctest::Approx(r.gamma_v).epsilon(1e-5));
}

TEST_CASE("KKT oracle agreement on coupled random plastic states") {
  const MaterialParams p = footing_params();
  Rng rng(34);
  const Real tau = 1e-3;
  int plastic = 0;
  for (int i = 0; i < 200 && plastic < 25; ++i) {
    PointState trial;
    trial.eps = random_plane_tensor(rng, 1e-5);
    trial.eps.xy() += 2e-5 * random_plane_tensor(rng, 1.0).xx();
    trial.m = 0.2 * random_plane_tensor(rng, 1.0).xx();
    const ReturnMapResult r = return_map(trial, 0.0, tau, p);
    if (r.elastic) continue;
    ++plastic;
    const KktSolution kkt = kkt_return_map(trial, 0.0, tau, p, 300, 1e-9);
    REQUIRE(kkt.converged);
    CHECK((kkt.eps_p - r.eps_p).norm() < 1e-5 * std::max(1e-4, r.eps_p.norm()));
    CHECK(std::abs(kkt.m_p - r.m_p) < 1e-5 * std::max(1e-4, std::abs(r.m_p)));
    CHECK(std::abs(kkt.alpha - r.alpha) < 1e-5 * std::max(1e-4, r.alpha));
  }
  CHECK(plastic >= 25);
}

TEST_CASE("plastic fluid content tracks volumetric plastic strain exactly") {
  const MaterialParams p = injection_params();
  Rng rng(35);
  int plastic = 0;
  for (int i = 0; i < 500 && plastic < 100; ++i) {
    PointState trial;
    trial.eps = random_plane_tensor(rng, 3e-7);
    trial.eps_p = random_plane_tensor(rng, 5e-8);
    trial.m_p = p.rho_f * p.b * trial.eps_p.trace();
    trial.alpha = std::abs(trial.eps_p.xy());
    trial.m = 1e-4;
    const ReturnMapResult r = return_map(trial, 0.0, 1e-3, p);
    if (r.elastic) continue;
    ++plastic;
    const Real dmp = r.m_p - trial.m_p;
    const Real dvol = p.rho_f * p.b * (r.eps_p.trace() - trial.eps_p.trace());
    CHECK(std::abs(dmp - dvol) < 1e-12 * std::max(1.0, std::abs(dmp)));
  }
  CHECK(plastic >= 100);
}

TEST_CASE("consistent tangent matches finite differences across the return map") {
  const MaterialParams p = footing_params();
  Rng rng(36);
  const Real tau = 1e-3, h = 1e-7;
  int plastic = 0;
  for (int i = 0; i < 400 && plastic < 30; ++i) {
    PointState trial;
    trial.eps = random_plane_tensor(rng, 1e-5);
    trial.eps.xy() += 2e-5 * random_plane_tensor(rng, 1.0).xx();
    trial.m = 0.2 * random_plane_tensor(rng, 1.0).yy();
    const ReturnMapResult r = return_map(trial, 0.0, tau, p);
    if (r.elastic || r.gamma_v < 1e-10) continue;
    // FD probes are only meaningful away from the split kinks and from the
    // elastic/plastic branch boundary.
    PointState conv = trial;
    conv.eps_p = r.eps_p;
    if (!away_from_split_kinks(conv.eps_e(), 1e-6)) continue;

    Mat7 fd = Mat7::Zero();
    bool probes_plastic = true;
    for (int j = 0; j < 7; ++j) {
      PointState tp = trial, tm = trial;
      if (j < 6) {
        Vec6 dm = Vec6::Zero();
        dm[j] = h;
        tp.eps += SymTensor3::from_mandel(dm);
        tm.eps -= SymTensor3::from_mandel(dm);
      } else {
        tp.m += h;
        tm.m -= h;
      }
      const ReturnMapResult rp = return_map(tp, 0.0, tau, p);
      const ReturnMapResult rm = return_map(tm, 0.0, tau, p);
      probes_plastic = probes_plastic && !rp.elastic && !rm.elastic;
      fd.col(j).head<6>() = (rp.sigma.mandel() - rm.sigma.mandel()) / (2 * h);
      fd(6, j) = (rp.dpsi_dm - rm.dpsi_dm) / (2 * h);
    }
    if (!probes_plastic) continue;
    ++plastic;
    CHECK((fd - r.tangent_ep).norm() / r.tangent_ep.norm() < 1e-4);
  }
  CHECK(plastic >= 30);
}

TEST_CASE("repeated application creeps and the viscous limit freezes the trial") {
  MaterialParams p = injection_params();
  const Real tau = 1e-3;
  PointState trial = yielding_trial(p, 5e-4);
  const ReturnMapResult r1 = return_map(trial, 0.0, tau, p);
  REQUIRE(!r1.elastic);

  PointState trial2 = trial;
  trial2.eps_p = r1.eps_p;
  trial2.alpha = r1.alpha;
  trial2.m_p = r1.m_p;
  const ReturnMapResult r2 = return_map(trial2, 0.0, tau, p);
  if (!r2.elastic) CHECK(r2.gamma_v <= r1.gamma_v + 1e-12);

  // eta_p / tau -> infinity: the viscous penalty freezes plastic flow.
  MaterialParams stiff = p;
  stiff.eta_p = 1e12;
  const ReturnMapResult rv = return_map(trial, 0.0, tau, stiff);
  CHECK((rv.eps_p - trial.eps_p).norm() < 1e-12);
  CHECK(rv.gamma_v < 1e-12);
}

TEST_CASE("rate-independent limit drives the converged yield value to zero") {
  MaterialParams p = injection_params();
  const Real tau = 1e-3;
  const PointState trial = yielding_trial(p, 5e-4);
  Real previous = std::numeric_limits<Real>::max();
  for (Real eta : {1e-4, 1e-6, 1e-8}) {
    p.eta_p = eta;
    const ReturnMapResult r = return_map(trial, 0.0, tau, p);
    REQUIRE(!r.elastic);
    PointState out = trial;
    out.eps_p = r.eps_p;
    out.alpha = r.alpha;
    out.m_p = r.m_p;
    const Real f = yield_function(driving_forces(out, p), p).value;
    CHECK(f >= -1e-12);
    CHECK(f <= previous + 1e-15);
    previous = f;
  }
  CHECK(previous < 1e-6);
}

TEST_CASE("return map converges on fully degraded material") {
  MaterialParams p = injection_params();
  const PointState trial = yielding_trial(p, 5e-1);
  const ReturnMapResult r = return_map(trial, 1.0, 1e-3, p);
  CHECK(r.converged);
}

TEST_CASE("non-convergence raises with diagnostics") {
  MaterialParams p = injection_params();
  const PointState trial = yielding_trial(p, 5e-4);
  CHECK_THROWS_AS(return_map(trial, 0.0, 1e-3, p, 1), ConvergenceError);
}

TEST_CASE("plastic work increment: elastic step and drained identity") {
  const MaterialParams p = injection_params();
  DrivingForces F;
  F.sigma = SymTensor3::diag(1, 2, 3);
  F.mu = 0.5;
  CHECK(plastic_work_increment(F, SymTensor3::Zero(), 0.0) == doctest::Approx(0.0));

  // Drained, no fluid: the two forms of the plastic work coincide.
  MaterialParams pd = injection_params();
  pd.b = 0;
  pd.M = 0;
  PointState trial = yielding_trial(pd, 5e-4);
  const ReturnMapResult r = return_map(trial, 0.0, 1e-3, pd);
  REQUIRE(!r.elastic);
  PointState out = trial;
  out.eps_p = r.eps_p;
  out.alpha = r.alpha;
  out.m_p = r.m_p;
  const DrivingForces F0 = undamaged_driving_forces(out, pd);
  const SymTensor3 d_eps_p = r.eps_p - trial.eps_p;
  const Real via_total = plastic_work_increment(F0, d_eps_p, r.m_p - trial.m_p);
  const SplitEnergy se = split_energy_and_stress(out.eps_e(), pd.lambda, pd.G);
  const Real via_eff = (se.sigma_plus + se.sigma_minus).ddot(d_eps_p);
  CHECK(std::abs(via_total - via_eff) < 1e-12 * std::max(1.0, std::abs(via_total)));
  CHECK(r.plastic_work_increment == doctest::Approx(via_total).epsilon(1e-12));

  // Coupled case: the identity still holds because dm_p = rho_f b tr(deps_p).
  const MaterialParams pc = injection_params();
  PointState trialc = yielding_trial(pc, 5e-4);
  trialc.m = 0.01;
  const ReturnMapResult rc = return_map(trialc, 0.0, 1e-3, pc);
  REQUIRE(!rc.elastic);
  PointState outc = trialc;
  outc.eps_p = rc.eps_p;
  outc.alpha = rc.alpha;
  outc.m_p = rc.m_p;
  const DrivingForces F0c = undamaged_driving_forces(outc, pc);
  const SplitEnergy sec = split_energy_and_stress(outc.eps_e(), pc.lambda, pc.G);
  const SymTensor3 d_eps_pc = rc.eps_p - trialc.eps_p;
  const Real total_form = plastic_work_increment(F0c, d_eps_pc, rc.m_p - trialc.m_p);
  const Real eff_form = (sec.sigma_plus + sec.sigma_minus).ddot(d_eps_pc);
  CHECK(std::abs(total_form - eff_form) < 1e-10 * std::max(1.0, std::abs(total_form)));
}

TEST_CASE("accumulated plastic work is non-decreasing along random load paths") {
  const MaterialParams p = injection_params();
  Rng rng(37);
  for (int path = 0; path < 10; ++path) {
    PointState state;
    Real w = 0;
    SymTensor3 eps = SymTensor3::Zero();
    for (int step = 0; step < 30; ++step) {
      eps += random_plane_tensor(rng, 4e-6);
      state.eps = eps;
      const ReturnMapResult r = return_map(state, 0.0, 1e-3, p);
      CHECK(r.plastic_work_increment >= -1e-14);
      w += r.plastic_work_increment;
      state.eps_p = r.eps_p;
      state.alpha = r.alpha;
      state.m_p = r.m_p;
      CHECK(w >= -1e-14);
    }
  }
}
