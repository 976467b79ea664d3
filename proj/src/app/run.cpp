#include "porofrac/app/run.hpp"

#include <chrono>
#include <nlohmann/json.hpp>

#include "porofrac/fracture.hpp"

namespace porofrac::app {

using namespace fem;
using nlohmann::json;

namespace {

Real crack_surface(const Scenario& sc, const SolutionState& state) {
  Real total = 0;
  for (int e = 0; e < sc.mesh.num_elems(); ++e)
    for (int qp = 0; qp < 4; ++qp) {
      const PointState& pt = state.points[e][qp];
      total += sc.cache.elems[e].qp[qp].weight * crack_density(pt.d, pt.grad_d, sc.material.l);
    }
  return total;
}

Real probe_pressure(const Scenario& sc, const SolutionState& state) {
  if (sc.probe_elem < 0) return 0;
  Real p = 0;
  for (int qp = 0; qp < 4; ++qp) {
    const PointState& pt = state.points[sc.probe_elem][qp];
    p += fluid_pressure(pt.eps_e(), pt.m_e(), sc.material);
  }
  return p / 4;
}

Real crack_extent_along_line(const Scenario& sc, const SolutionState& state) {
  Real extent = 0;
  for (size_t i = 0; i + 1 < sc.line_nodes.size(); ++i) {
    const int a = sc.line_nodes[i], b = sc.line_nodes[i + 1];
    if (state.d[a] > 0.9 && state.d[b] > 0.9)
      extent += sc.mesh.nodes[b].x() - sc.mesh.nodes[a].x();
  }
  return extent;
}

void collect_profile(const Scenario& sc, const SolutionState& state, RunResult& out) {
  out.profile.clear();
  for (int e : sc.profile_elems) {
    RunResult::ProfileRow row{};
    Vec2 c = Vec2::Zero();
    for (int i = 0; i < 4; ++i) c += 0.25 * sc.mesh.nodes[sc.mesh.quads[e][i]];
    row.x = c.x();
    Real dsum = 0;
    for (int qp = 0; qp < 4; ++qp) {
      const PointState& pt = state.points[e][qp];
      row.m += pt.m / 4;
      row.m_e += pt.m_e() / 4;
      row.m_p += pt.m_p / 4;
      row.p += fluid_pressure(pt.eps_e(), pt.m_e(), sc.material) / 4;
      row.w += fracture_opening(pt.eps, pt.grad_d, sc.mesh.char_length[e]) / 4;
      dsum += pt.d / 4;
    }
    row.d = dsum;
    out.profile.push_back(row);
  }
}

}  // namespace

RunResult run_scenario(Scenario& sc, const ScenarioConfig& cfg, bool write_outputs,
                       SolutionState* final_out) {
  const auto t_begin = std::chrono::steady_clock::now();
  RunResult out;
  SolutionState state = sc.initial;
  SolverOptions sopts;
  sopts.threads = cfg.threads;

  json manifest;
  manifest["version"] = kVersion;
  manifest["config"] = cfg.resolved;
  manifest["failed"] = false;
  manifest["failed_step"] = -1;
  json steps_log = json::array();

  if (write_outputs) ensure_directory(cfg.output_dir);

  Real surface_prev = crack_surface(sc, state);
  std::string error_text;

  for (int step = 1; step <= sc.n_steps; ++step) {
    sc.set_step_values(step);
    StepReport rep;
    SolutionState next;
    try {
      next = solve_step(sc.cache, sc.dofs, sc.neumann, state, sc.tau, sc.material, sopts, &rep);
    } catch (const std::exception& err) {
      out.exit_code = 1;
      out.failed_step = step;
      out.error = err.what();
      manifest["failed"] = true;
      manifest["failed_step"] = step;
      manifest["error"] = err.what();
      break;
    }

    // step diagnostics
    out.total_newton_iterations += rep.iterations;
    out.max_mass_error = std::max(out.max_mass_error, std::abs(rep.mass_error));
    Real stored = 0;
    for (int e = 0; e < sc.mesh.num_elems(); ++e)
      for (int qp = 0; qp < 4; ++qp)
        stored += sc.cache.elems[e].qp[qp].weight * std::abs(next.points[e][qp].m);
    out.mass_scale = std::max(out.mass_scale, stored);

    for (int i = 0; i < sc.dofs.n_d && out.d_monotone; ++i)
      if (next.d[i] < state.d[i] - 1e-14) out.d_monotone = false;
    for (int e = 0; e < sc.mesh.num_elems() && out.internals_monotone; ++e)
      for (int qp = 0; qp < 4; ++qp) {
        const PointState& a = state.points[e][qp];
        const PointState& b = next.points[e][qp];
        const Real tol = 1e-12;
        if (b.alpha < a.alpha - tol || b.history_H < a.history_H - tol ||
            b.w_plast < a.w_plast - tol) {
          out.internals_monotone = false;
          break;
        }
      }
    const Real surface = crack_surface(sc, state);
    if (surface < surface_prev - 1e-10 * std::max(1.0, surface_prev))
      out.crack_surface_monotone = false;
    surface_prev = surface;

    state = std::move(next);
    out.steps_done = step;
    out.final_time = state.time;

    // curves
    if (!sc.ramped_u_dofs.empty()) {
      Real F = 0;
      for (int dof : sc.reaction_dofs) F += rep.residual[dof];
      out.u_curve.push_back(std::abs(sc.dofs.u_value[sc.ramped_u_dofs.front()]));
      out.F_curve.push_back(std::abs(F));
    }
    if (sc.probe_elem >= 0) {
      out.V_curve.push_back(step * sc.tau * sc.inject_rate / sc.material.rho_f);
      out.p_curve.push_back(probe_pressure(sc, state));
    }

    steps_log.push_back({{"step", step},
                         {"newton_iterations", rep.iterations},
                         {"r0", rep.r0},
                         {"r_final", rep.r_final},
                         {"mass_error", rep.mass_error}});

    if (write_outputs && cfg.output_every > 0 && step % cfg.output_every == 0) {
      const FieldSnapshot snap = make_snapshot(sc, state);
      export_vtk(snap, cfg.output_dir + "/fields_" + std::to_string(step) + ".vtk");
    }
  }

  out.crack_extent = crack_extent_along_line(sc, state);
  collect_profile(sc, state, out);

  if (write_outputs) {
    std::vector<std::string> written;
    const FieldSnapshot snap = make_snapshot(sc, state);
    const std::string final_vtk = cfg.output_dir + "/fields_final.vtk";
    export_vtk(snap, final_vtk);
    written.push_back(final_vtk);

    if (!out.u_curve.empty()) {
      CsvTable t;
      t.columns = {"u_m", "F_MN_per_m"};
      for (size_t i = 0; i < out.u_curve.size(); ++i) t.rows.push_back({out.u_curve[i], out.F_curve[i]});
      const std::string path = cfg.output_dir + "/load_displacement.csv";
      export_csv(t, path);
      written.push_back(path);
    }
    if (!out.V_curve.empty()) {
      CsvTable t;
      t.columns = {"V_m3", "p_MPa"};
      for (size_t i = 0; i < out.V_curve.size(); ++i) t.rows.push_back({out.V_curve[i], out.p_curve[i]});
      const std::string path = cfg.output_dir + "/pressure_volume.csv";
      export_csv(t, path);
      written.push_back(path);
    }
    if (!out.profile.empty()) {
      CsvTable t;
      t.columns = {"x_m", "m_kg_per_m3", "m_e_kg_per_m3", "m_p_kg_per_m3", "p_MPa", "w_m", "d"};
      for (const auto& r : out.profile) t.rows.push_back({r.x, r.m, r.m_e, r.m_p, r.p, r.w, r.d});
      const std::string path = cfg.output_dir + "/profile_notch_line.csv";
      export_csv(t, path);
      written.push_back(path);
    }

    manifest["steps"] = steps_log;
    const auto t_end = std::chrono::steady_clock::now();
    manifest["wall_clock_s"] = std::chrono::duration<double>(t_end - t_begin).count();
    json sums = json::object();
    for (const auto& path : written) sums[path.substr(cfg.output_dir.size() + 1)] = file_checksum(path);
    manifest["checksums"] = sums;
    atomic_write(cfg.output_dir + "/manifest.json", manifest.dump(2) + "\n");
  }

  if (final_out) *final_out = std::move(state);
  return out;
}

RunResult run(const ScenarioConfig& cfg) {
  Scenario sc = build_scenario(cfg);
  return run_scenario(sc, cfg, true);
}

}  // namespace porofrac::app
