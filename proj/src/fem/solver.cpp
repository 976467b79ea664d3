#include "porofrac/fem/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "porofrac/fracture.hpp"

namespace porofrac::fem {

namespace {

void apply_dirichlet(const DofMap& dofs, StepWorkspace& work) {
  for (int i = 0; i < dofs.n_u; ++i)
    if (dofs.u_fixed[i]) work.u[i] = dofs.u_value[i];
  for (int i = 0; i < dofs.n_q; ++i)
    if (dofs.q_fixed[i]) work.q[i] = dofs.q_value[i];
}

}  // namespace

void impose_phase_field(const FemCache& cache, const DofMap& dofs, SolutionState& state) {
  for (int i = 0; i < dofs.n_d; ++i)
    if (dofs.d_fixed[i]) state.d[i] = dofs.d_value[i];
  const Mesh& mesh = *cache.mesh;
  for (int e = 0; e < mesh.num_elems(); ++e) {
    Vec4 de;
    for (int a = 0; a < 4; ++a) de[a] = state.d[mesh.quads[e][a]];
    for (int qp = 0; qp < 4; ++qp) {
      const QuadPointGeom& g = cache.elems[e].qp[qp];
      state.points[e][qp].d = g.N.dot(de);
      const Vec2 grad2 = g.dN * de;
      state.points[e][qp].grad_d = Vec3(grad2.x(), grad2.y(), 0);
    }
  }
}

SolutionState solve_step(const FemCache& cache, const DofMap& dofs, const NeumannBC& neumann,
                         const SolutionState& committed, Real tau, const MaterialParams& mat,
                         const SolverOptions& opts, StepReport* report) {
  if (tau <= 0) throw ConfigError("solve_step: tau must be positive");
  const Mesh& mesh = *cache.mesh;
  const int n = dofs.n_u + dofs.n_q;

  StepWorkspace work = StepWorkspace::from(committed);
  apply_dirichlet(dofs, work);

  // Residual scales per field: force from a reference strain at the mean
  // element size, flux rows from the matching fluid potential over the step.
  const Real sigma_ref = opts.eps_ref * (mat.lambda + 2 * mat.G + mat.M * mat.b * mat.b);
  const Real s_u = sigma_ref * cache.mean_char_length;
  const Real s_q = tau * sigma_ref / mat.rho_f;

  AssembleOptions aopts;
  aopts.threads = opts.threads;

  StepReport rep;
  AssembledSystem sys;
  Real scaled0 = 0;
  bool converged = false;
  for (int it = 0; it <= opts.max_newton; ++it) {
    sys = assemble_mech_flux(cache, dofs, neumann, committed, work, tau, mat, aopts);

    Real ru = 0, rq = 0;
    for (int i = 0; i < dofs.n_u; ++i)
      if (!dofs.u_fixed[i]) ru = std::max(ru, std::abs(sys.residual[i]));
    for (int i = 0; i < dofs.n_q; ++i)
      if (!dofs.q_fixed[i]) rq = std::max(rq, std::abs(sys.residual[dofs.n_u + i]));
    const Real scaled = std::max(ru / s_u, rq / s_q);
    rep.history.push_back(scaled);
    if (it == 0) {
      scaled0 = scaled;
      rep.r0 = scaled;
    }
    rep.iterations = it;
    rep.r_final = scaled;
    if (scaled < opts.newton_abs || scaled < opts.newton_rel * scaled0) {
      converged = true;
      break;
    }
    if (it == opts.max_newton) break;

    Eigen::VectorXd rhs = -sys.residual;
    for (int i = 0; i < dofs.n_u; ++i)
      if (dofs.u_fixed[i]) rhs[i] = 0;
    for (int i = 0; i < dofs.n_q; ++i)
      if (dofs.q_fixed[i]) rhs[dofs.n_u + i] = 0;

    Eigen::SparseLU<SparseMat> lu(sys.tangent);
    if (lu.info() != Eigen::Success)
      throw ConvergenceError("solve_step: singular coupled tangent", scaled, it);
    const Eigen::VectorXd delta = lu.solve(rhs);
    if (!delta.allFinite())
      throw ConvergenceError("solve_step: non-finite Newton increment", scaled, it);
    work.u += delta.head(dofs.n_u);
    work.q += delta.tail(dofs.n_q);
  }
  if (!converged)
    throw ConvergenceError("solve_step: coupled Newton did not converge", rep.r_final,
                           rep.iterations);

  // Crack driving history from the converged mechanical state.
  std::vector<std::array<Real, 4>> history(mesh.num_elems());
  for (int e = 0; e < mesh.num_elems(); ++e) {
    for (int qp = 0; qp < 4; ++qp) {
      const QpResult& res = work.results[e][qp];
      const PointState& cp = committed.points[e][qp];
      history[e][qp] = update_history(cp, res.psi0_plus, psi0_plast(res.alpha, mat),
                                      cp.w_plast + res.w_inc, mat);
    }
  }

  // Single linear solve for the phase field (the kernel is quadratic in d).
  SolutionState next = committed;
  next.u = work.u;
  next.q = work.q;
  next.eas = work.eas;
  next.time = committed.time + tau;
  next.step = committed.step + 1;

  Eigen::VectorXd d_new = committed.d;
  if (opts.solve_phase) {
    for (int i = 0; i < dofs.n_d; ++i)
      if (dofs.d_fixed[i]) d_new[i] = dofs.d_value[i];
    const AssembledSystem ph = assemble_phase(cache, dofs, history, d_new, mat);
    Eigen::VectorXd rhs = -ph.residual;
    for (int i = 0; i < dofs.n_d; ++i)
      if (dofs.d_fixed[i]) rhs[i] = 0;
    Eigen::SimplicialLLT<SparseMat> llt(ph.tangent);
    if (llt.info() != Eigen::Success)
      throw NumericalError("solve_step: phase-field system not positive definite");
    d_new += llt.solve(rhs);

    // Irreversibility clamp and the [0, 1] bound.
    for (int i = 0; i < dofs.n_d; ++i) {
      d_new[i] = std::max(d_new[i], committed.d[i]);
      if (d_new[i] > 1.0) {
        rep.max_d_overshoot = std::max(rep.max_d_overshoot, d_new[i] - 1.0);
        d_new[i] = 1.0;
      }
    }
  }
  next.d = d_new;

  // Commit the constitutive state.
  for (int e = 0; e < mesh.num_elems(); ++e) {
    Vec4 de;
    for (int a = 0; a < 4; ++a) de[a] = d_new[mesh.quads[e][a]];
    for (int qp = 0; qp < 4; ++qp) {
      const QuadPointGeom& g = cache.elems[e].qp[qp];
      const QpResult& res = work.results[e][qp];
      PointState& pt = next.points[e][qp];
      pt.eps = res.eps;
      pt.m = res.m;
      pt.d = g.N.dot(de);
      const Vec2 grad2 = g.dN * de;
      pt.grad_d = Vec3(grad2.x(), grad2.y(), 0);
      pt.eps_p = res.eps_p;
      pt.alpha = res.alpha;
      pt.m_p = res.m_p;
      pt.history_H = history[e][qp];
      pt.w_plast = committed.points[e][qp].w_plast + res.w_inc;
    }
  }

  rep.converged = true;
  rep.residual = sys.residual;
  rep.mass_error = mass_balance_residual(cache, dofs, committed, next, tau);
  if (report) *report = rep;
  return next;
}

}  // namespace porofrac::fem
