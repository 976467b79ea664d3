#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "porofrac/fracture.hpp"
#include "support/oracles.hpp"

using namespace porofrac;
using namespace porofrac::testing;

TEST_CASE("crack density values") {
  CHECK(crack_density(0.0, Vec3::Zero(), 0.5) == doctest::Approx(0.0));
  CHECK(crack_density(1.0, Vec3::Zero(), 0.5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(crack_density(0.5, Vec3::Zero(), 0.0), ConfigError);
}

TEST_CASE("optimal 1D profile integrates to unit crack surface") {
  // d(x) = exp(-|x|/l) gives gamma = exp(-2|x|/l) / l, whose integral is 1.
  const Real l = 0.5;
  Real integral = 0;
  const int n = 200000;
  const Real L = 20 * l, dx = 2 * L / n;
  for (int i = 0; i < n; ++i) {
    const Real x = -L + (i + 0.5) * dx;
    const Real d = std::exp(-std::abs(x) / l);
    const Real dd = -std::copysign(1.0, x) * d / l;
    integral += crack_density(d, Vec3(dd, 0, 0), l) * dx;
  }
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("degradation function and derivatives") {
  const Degradation g0 = degradation(0.0);
  CHECK(g0.g == doctest::Approx(1.0));
  CHECK(g0.dg == doctest::Approx(-2.0));
  CHECK(g0.ddg == doctest::Approx(2.0));
  const Degradation g1 = degradation(1.0);
  CHECK(g1.g == doctest::Approx(0.0));
  CHECK(g1.dg == doctest::Approx(0.0));
  const Degradation gh = degradation(0.5);
  CHECK(gh.g == doctest::Approx(0.25));
  CHECK(gh.dg == doctest::Approx(-1.0));
  CHECK(gh.ddg == doctest::Approx(2.0));
}

TEST_CASE("history field update") {
  MaterialParams p = injection_params();
  PointState s;
  s.history_H = 0.2;

  // below threshold: unchanged
  CHECK(update_history(s, 0.5 * p.psi_c, 0.0, 0.0, p) == doctest::Approx(0.2));

  // monotone along any sequence
  Rng rng(41);
  std::uniform_real_distribution<Real> u(0, 1e-6);
  Real H = 0;
  PointState t;
  for (int i = 0; i < 200; ++i) {
    t.history_H = H;
    const Real Hn = update_history(t, u(rng), u(rng), u(rng), p);
    CHECK(Hn >= H);
    H = Hn;
  }

  // mode selection
  p.driving_force_mode = DrivingForceMode::HardeningEnergy;
  PointState z;
  CHECK(update_history(z, 2 * p.psi_c, 3 * p.psi_c, 7 * p.psi_c, p) ==
        doctest::Approx(4 * p.psi_c));
  p.driving_force_mode = DrivingForceMode::PlasticWork;
  CHECK(update_history(z, 2 * p.psi_c, 3 * p.psi_c, 7 * p.psi_c, p) ==
        doctest::Approx(8 * p.psi_c));
}

TEST_CASE("ideal plasticity: hardening-energy mode stays brittle, plastic-work mode does not") {
  MaterialParams p = injection_params();
  p.h = 0;
  p.sigma_y = 0;
  p.q1 = 0;
  p.b = 0;
  p.M = 0;

  // Drive one plastic shear path and accumulate both candidate driving terms.
  PointState state;
  Real w_plast = 0;
  SymTensor3 eps = SymTensor3::Zero();
  for (int step = 0; step < 10; ++step) {
    eps.xy() += 1e-4;
    state.eps = eps;
    const ReturnMapResult r = return_map(state, 0.0, 1e-3, p);
    w_plast += r.plastic_work_increment;
    state.eps_p = r.eps_p;
    state.alpha = r.alpha;
    state.m_p = r.m_p;
  }
  CHECK(state.alpha > 0);                      // path did yield
  CHECK(psi0_plast(state.alpha, p) == 0.0);    // no stored hardening energy
  CHECK(w_plast > 0);                          // but real plastic work was done
}

TEST_CASE("phase-field kernel: intact equilibrium and the homogeneous root") {
  const MaterialParams p = injection_params();
  const FractureKernel k0 = phase_field_kernel(0.0, Vec3::Zero(), 0.0, 0.0, p);
  CHECK(k0.r_d == doctest::Approx(0.0));
  CHECK(k0.r_grad_d.norm() == doctest::Approx(0.0));

  Rng rng(42);
  std::uniform_real_distribution<Real> u(0, 1e-5);
  for (int i = 0; i < 100; ++i) {
    const Real H = u(rng);
    const Real d = H / (H + p.psi_c);
    CHECK(d >= 0.0);
    CHECK(d < 1.0);
    const FractureKernel k = phase_field_kernel(d, Vec3::Zero(), H, 0.0, p);
    CHECK(std::abs(k.r_d) < 1e-14 * std::max(1.0, H));
  }
}

TEST_CASE("phase-field kernel tangents match finite differences") {
  const MaterialParams p = injection_params();
  const Real H = 3 * p.psi_c, h = 1e-8;
  const Vec3 g(0.1, -0.2, 0);
  const FractureKernel k = phase_field_kernel(0.3, g, H, 0.0, p);
  const Real fd_dd = (phase_field_kernel(0.3 + h, g, H, 0.0, p).r_d -
                      phase_field_kernel(0.3 - h, g, H, 0.0, p).r_d) /
                     (2 * h);
  CHECK(k.k_dd == doctest::Approx(fd_dd).epsilon(1e-8));
  const Vec3 gp = g + Vec3(h, 0, 0);
  const Vec3 gm = g - Vec3(h, 0, 0);
  const Real fd_gg = (phase_field_kernel(0.3, gp, H, 0.0, p).r_grad_d[0] -
                      phase_field_kernel(0.3, gm, H, 0.0, p).r_grad_d[0]) /
                     (2 * h);
  CHECK(k.k_grad == doctest::Approx(fd_gg).epsilon(1e-8));
}
