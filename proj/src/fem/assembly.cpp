#include "porofrac/fem/assembly.hpp"

#include <thread>

#include "porofrac/fracture.hpp"

namespace porofrac::fem {

namespace {

using Vec8 = Eigen::Matrix<Real, 8, 1>;
using Mat8x4 = Eigen::Matrix<Real, 8, 4>;
using Mat12 = Eigen::Matrix<Real, 12, 12>;
using Vec12 = Eigen::Matrix<Real, 12, 1>;

struct ElementBuild {
  Vec8 r_u = Vec8::Zero();
  Vec4 r_q = Vec4::Zero();
  Vec4 r_a = Vec4::Zero();
  Eigen::Matrix<Real, 8, 8> K_uu = Eigen::Matrix<Real, 8, 8>::Zero();
  Mat8x4 K_uq = Mat8x4::Zero();
  Mat8x4 K_ua = Mat8x4::Zero();
  Mat4 K_qq = Mat4::Zero();
  Mat4 K_aq = Mat4::Zero();  // rows a, cols q
  Mat4 K_aa = Mat4::Zero();
  Real energy = 0;
  std::array<QpResult, 4> results;
};

struct ElementOut {
  Vec12 r = Vec12::Zero();
  Mat12 K = Mat12::Zero();
  std::array<QpResult, 4> results;
  Vec4 eas = Vec4::Zero();
};

SymTensor3 strain_from_mandel4(const Vec4& e4) {
  Vec6 m = Vec6::Zero();
  m.head<4>() = e4;
  return SymTensor3::from_mandel(m);
}

class MechKernel {
 public:
  MechKernel(const FemCache& cache, const DofMap& dofs, const SolutionState& committed, Real tau,
             const MaterialParams& mat, const AssembleOptions& opts)
      : cache_(cache), dofs_(dofs), committed_(committed), tau_(tau), mat_(mat), opts_(opts) {}

  Vec8 gather_u(const Eigen::VectorXd& u, int e) const {
    Vec8 ue;
    for (int a = 0; a < 4; ++a)
      ue.segment<2>(2 * a) = u.segment<2>(dofs_.u_dof(cache_.mesh->quads[e][a], 0));
    return ue;
  }
  Vec4 gather_q(const Eigen::VectorXd& q, int e) const {
    Vec4 qe;
    for (int s = 0; s < 4; ++s) qe[s] = q[dofs_.elem_flux_dof[e][s]];
    return qe;
  }

  ElementBuild build(int e, const Vec8& ue, const Vec4& qe, const Vec4& ae,
                     bool with_energy) const {
    ElementBuild out;
    const Real h_e = cache_.mesh->char_length[e];
    for (int qp = 0; qp < 4; ++qp) {
      const QuadPointGeom& g = cache_.elems[e].qp[qp];
      const PointState& cp = committed_.points[e][qp];
      const Real w = g.weight;

      PointState trial = cp;
      trial.eps = strain_from_mandel4(g.B * ue + g.G * ae);
      trial.m = mass_update(cp.m, tau_, (g.divq * qe)(0, 0));

      ReturnMapResult rm;
      try {
        rm = opts_.frozen_plastic ? frozen_evaluate(trial, cp.d, mat_)
                                  : return_map(trial, cp.d, tau_, mat_);
      } catch (const std::exception& err) {
        throw AssemblyError(std::string("element ") + std::to_string(e) + " qp " +
                                std::to_string(qp) + ": " + err.what(),
                            e);
      }

      QpResult& res = out.results[qp];
      res.eps = trial.eps;
      res.m = trial.m;
      res.eps_p = rm.eps_p;
      res.alpha = rm.alpha;
      res.m_p = rm.m_p;
      res.gamma = rm.gamma_v;
      res.sigma = rm.sigma;
      res.dpsi_dm = rm.dpsi_dm;
      res.psi0_plus = rm.psi0_plus;
      res.w_inc = rm.plastic_work_increment;
      res.elastic = rm.elastic;
      res.iterations = rm.iterations;

      const Mat2 Kinv = permeability_inverse(cp, h_e, mat_);
      const Vec2 h = g.Nq * qe;
      const Vec4 sig4 = rm.sigma.mandel().head<4>();

      out.r_u += w * g.B.transpose() * sig4;
      out.r_a += w * g.G.transpose() * sig4;
      out.r_q += w * (g.divq.transpose() * (-tau_ * rm.dpsi_dm) +
                      g.Nq.transpose() * (tau_ * (Kinv * h)));

      if (with_energy) {
        PointState full = trial;
        full.eps_p = rm.eps_p;
        full.alpha = rm.alpha;
        full.m_p = rm.m_p;
        out.energy += w * (total_energy(full, mat_) + 0.5 * tau_ * h.dot(Kinv * h));
      }

      const auto E44 = rm.tangent_ep.topLeftCorner<4, 4>();
      const Vec4 Eem = rm.tangent_ep.block<4, 1>(0, 6);
      const Real Emm = rm.tangent_ep(6, 6);

      out.K_uu += w * g.B.transpose() * E44 * g.B;
      out.K_ua += w * g.B.transpose() * E44 * g.G;
      out.K_aa += w * g.G.transpose() * E44 * g.G;
      out.K_uq += w * (g.B.transpose() * Eem) * (-tau_ * g.divq);
      out.K_aq += w * (g.G.transpose() * Eem) * (-tau_ * g.divq);
      out.K_qq += w * (g.divq.transpose() * (tau_ * tau_ * Emm) * g.divq +
                       g.Nq.transpose() * (tau_ * Kinv) * g.Nq);
    }
    return out;
  }

  /// Drives the enhanced modes to stationarity, then condenses them out.
  ElementOut condensed(int e, const Eigen::VectorXd& u, const Eigen::VectorXd& q,
                       Vec4 ae) const {
    const Vec8 ue = gather_u(u, e);
    const Vec4 qe = gather_q(q, e);

    ElementBuild b = build(e, ue, qe, ae, false);
    const Real tol = std::max(1e-28, 1e-12 * b.r_a.lpNorm<Eigen::Infinity>());
    for (int it = 0; b.r_a.lpNorm<Eigen::Infinity>() > tol && it < 10; ++it) {
      const Eigen::LDLT<Mat4> ldlt(b.K_aa);
      if (ldlt.info() != Eigen::Success)
        throw AssemblyError("singular enhanced-mode block", e);
      const Vec4 da = ldlt.solve(b.r_a);
      if (!da.allFinite()) throw AssemblyError("singular enhanced-mode block", e);
      ae -= da;
      b = build(e, ue, qe, ae, false);
      if (da.lpNorm<Eigen::Infinity>() < 1e-15 * (1 + ae.lpNorm<Eigen::Infinity>())) break;
    }

    ElementOut out;
    out.eas = ae;
    out.results = b.results;

    const Eigen::LDLT<Mat4> ldlt(b.K_aa);
    if (ldlt.info() != Eigen::Success) throw AssemblyError("singular enhanced-mode block", e);
    const Mat8x4 Sa_u = b.K_ua * ldlt.solve(Mat4::Identity());  // K_ua K_aa^-1
    const Mat4 Sa_q = b.K_aq.transpose() * ldlt.solve(Mat4::Identity());

    out.r.head<8>() = b.r_u - Sa_u * b.r_a;
    out.r.tail<4>() = b.r_q - Sa_q * b.r_a;
    out.K.topLeftCorner<8, 8>() = b.K_uu - Sa_u * b.K_ua.transpose();
    out.K.topRightCorner<8, 4>() = b.K_uq - Sa_u * b.K_aq;
    out.K.bottomLeftCorner<4, 8>() = out.K.topRightCorner<8, 4>().transpose();
    out.K.bottomRightCorner<4, 4>() = b.K_qq - Sa_q * b.K_aq;
    return out;
  }

  const FemCache& cache_;
  const DofMap& dofs_;
  const SolutionState& committed_;
  Real tau_;
  const MaterialParams& mat_;
  AssembleOptions opts_;
};

void parallel_for(int n, int threads, const std::function<void(int, int)>& chunk) {
  if (threads <= 1) {
    chunk(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const int per = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * per, hi = std::min(n, lo + per);
    if (lo >= hi) break;
    pool.emplace_back([&, t, lo, hi] {
      try {
        chunk(lo, hi);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace

Mat2 permeability_inverse(const PointState& committed, Real L_perp, const MaterialParams& mat) {
  const SymTensor3 K = permeability(committed.eps, committed.d, committed.grad_d, L_perp, mat);
  Mat2 K2;
  K2 << K.xx(), K.xy(), K.xy(), K.yy();
  const Real floor = detail::kPermFloorRel * mat.rho_f * mat.rho_f * mat.K +
                     std::numeric_limits<Real>::min();
  K2 += floor * Mat2::Identity();
  return K2.inverse();
}

AssembledSystem assemble_mech_flux(const FemCache& cache, const DofMap& dofs,
                                   const NeumannBC& neumann, const SolutionState& committed,
                                   StepWorkspace& work, Real tau, const MaterialParams& mat,
                                   const AssembleOptions& opts) {
  const Mesh& mesh = *cache.mesh;
  const int n = dofs.n_u + dofs.n_q;
  const int ne = mesh.num_elems();

  MechKernel kernel(cache, dofs, committed, tau, mat, opts);
  std::vector<ElementOut> outs(ne);
  parallel_for(ne, std::max(1, opts.threads), [&](int lo, int hi) {
    for (int e = lo; e < hi; ++e) outs[e] = kernel.condensed(e, work.u, work.q, work.eas[e]);
  });

  AssembledSystem sys;
  sys.residual = Eigen::VectorXd::Zero(n);

  const auto fixed = [&](int dof) {
    return dof < dofs.n_u ? dofs.u_fixed[dof] != 0 : dofs.q_fixed[dof - dofs.n_u] != 0;
  };

  std::vector<Eigen::Triplet<Real>> trips;
  if (opts.with_tangent) trips.reserve(static_cast<size_t>(ne) * 144 + n);

  // Deterministic merge in element order.
  for (int e = 0; e < ne; ++e) {
    work.eas[e] = outs[e].eas;
    work.results[e] = outs[e].results;

    std::array<int, 12> gdof;
    for (int a = 0; a < 4; ++a) {
      gdof[2 * a] = dofs.u_dof(mesh.quads[e][a], 0);
      gdof[2 * a + 1] = dofs.u_dof(mesh.quads[e][a], 1);
    }
    for (int s = 0; s < 4; ++s) gdof[8 + s] = dofs.n_u + dofs.elem_flux_dof[e][s];

    for (int i = 0; i < 12; ++i) {
      sys.residual[gdof[i]] += outs[e].r[i];
      if (!opts.with_tangent || fixed(gdof[i])) continue;
      for (int j = 0; j < 12; ++j) {
        if (fixed(gdof[j])) continue;
        trips.emplace_back(gdof[i], gdof[j], outs[e].K(i, j));
      }
    }
  }

  // External loading: tractions enter the displacement rows, the prescribed
  // fluid potential enters the flux rows through the integrated normal flux.
  for (const auto& t : neumann.tractions) {
    const auto& edge = mesh.edges[t.edge];
    const Real len = mesh.edge_length(t.edge);
    for (int node : {edge.n0, edge.n1})
      sys.residual.segment<2>(dofs.u_dof(node, 0)) -= 0.5 * len * t.traction;
  }
  for (const auto& pot : neumann.potentials) {
    const auto& edge = mesh.edges[pot.edge];
    const int e0 = edge.elem[0];
    for (int s = 0; s < 4; ++s) {
      if (mesh.elem_edges[e0][s] != pot.edge) continue;
      const int dof = dofs.n_u + dofs.elem_flux_dof[e0][s];
      sys.residual[dof] += tau * pot.mu_bar * mesh.elem_signs[e0][s];
    }
  }

  if (opts.with_tangent) {
    for (int i = 0; i < n; ++i)
      if (fixed(i)) trips.emplace_back(i, i, 1.0);
    sys.tangent.resize(n, n);
    sys.tangent.setFromTriplets(trips.begin(), trips.end());
  }
  return sys;
}

Real incremental_potential(const FemCache& cache, const DofMap& dofs, const NeumannBC& neumann,
                           const SolutionState& committed, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& q, std::vector<Vec4>& eas, Real tau,
                           const MaterialParams& mat) {
  AssembleOptions opts;
  opts.frozen_plastic = true;
  MechKernel kernel(cache, dofs, committed, tau, mat, opts);
  const Mesh& mesh = *cache.mesh;

  Real total = 0;
  for (int e = 0; e < mesh.num_elems(); ++e) {
    // Stationarity of the enhanced modes, then the reduced element energy.
    ElementOut out = kernel.condensed(e, u, q, eas[e]);
    eas[e] = out.eas;
    const ElementBuild b =
        kernel.build(e, kernel.gather_u(u, e), kernel.gather_q(q, e), eas[e], true);
    total += b.energy;
  }

  for (const auto& t : neumann.tractions) {
    const auto& edge = mesh.edges[t.edge];
    const Real len = mesh.edge_length(t.edge);
    for (int node : {edge.n0, edge.n1})
      total -= 0.5 * len * t.traction.dot(u.segment<2>(dofs.u_dof(node, 0)));
  }
  for (const auto& pot : neumann.potentials) {
    const auto& edge = mesh.edges[pot.edge];
    const int e0 = edge.elem[0];
    for (int s = 0; s < 4; ++s) {
      if (mesh.elem_edges[e0][s] != pot.edge) continue;
      total += tau * pot.mu_bar * mesh.elem_signs[e0][s] * q[dofs.elem_flux_dof[e0][s]];
    }
  }
  return total;
}

AssembledSystem assemble_phase(const FemCache& cache, const DofMap& dofs,
                               const std::vector<std::array<Real, 4>>& history,
                               const Eigen::VectorXd& d, const MaterialParams& mat) {
  const Mesh& mesh = *cache.mesh;
  AssembledSystem sys;
  sys.residual = Eigen::VectorXd::Zero(dofs.n_d);
  std::vector<Eigen::Triplet<Real>> trips;
  trips.reserve(static_cast<size_t>(mesh.num_elems()) * 16 + dofs.n_d);

  for (int e = 0; e < mesh.num_elems(); ++e) {
    Vec4 de;
    for (int a = 0; a < 4; ++a) de[a] = d[mesh.quads[e][a]];

    Vec4 r_e = Vec4::Zero();
    Mat4 K_e = Mat4::Zero();
    for (int qp = 0; qp < 4; ++qp) {
      const QuadPointGeom& g = cache.elems[e].qp[qp];
      const Real d_qp = g.N.dot(de);
      const Vec2 grad2 = g.dN * de;
      const FractureKernel k =
          phase_field_kernel(d_qp, Vec3(grad2.x(), grad2.y(), 0), history[e][qp], 0.0, mat);
      r_e += g.weight * (g.N * k.r_d + g.dN.transpose() * k.r_grad_d.head<2>());
      K_e += g.weight *
             (k.k_dd * (g.N * g.N.transpose()) + k.k_grad * (g.dN.transpose() * g.dN));
    }

    for (int i = 0; i < 4; ++i) {
      const int gi = mesh.quads[e][i];
      sys.residual[gi] += r_e[i];
      if (dofs.d_fixed[gi]) continue;
      for (int j = 0; j < 4; ++j) {
        const int gj = mesh.quads[e][j];
        if (dofs.d_fixed[gj]) continue;
        trips.emplace_back(gi, gj, K_e(i, j));
      }
    }
  }
  for (int i = 0; i < dofs.n_d; ++i)
    if (dofs.d_fixed[i]) trips.emplace_back(i, i, 1.0);
  sys.tangent.resize(dofs.n_d, dofs.n_d);
  sys.tangent.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

Real mass_balance_residual(const FemCache& cache, const DofMap& dofs,
                           const SolutionState& before, const SolutionState& after, Real tau) {
  const Mesh& mesh = *cache.mesh;
  Real stored = 0;
  for (int e = 0; e < mesh.num_elems(); ++e)
    for (int qp = 0; qp < 4; ++qp)
      stored += cache.elems[e].qp[qp].weight * (after.points[e][qp].m - before.points[e][qp].m);

  // Interior faces appear twice with opposite signs and cancel; boundary and
  // split faces carry the net flux.
  Real outflux = 0;
  for (int e = 0; e < mesh.num_elems(); ++e)
    for (int s = 0; s < 4; ++s)
      outflux += mesh.elem_signs[e][s] * after.q[dofs.elem_flux_dof[e][s]];

  return stored + tau * outflux;
}

}  // namespace porofrac::fem
