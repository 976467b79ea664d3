#include "porofrac/app/scenarios.hpp"

#include <algorithm>

namespace porofrac::app {

using namespace fem;

namespace {

constexpr Real kGeomTol = 1e-9;

bool on_line(Real v, Real target, Real scale) { return std::abs(v - target) < kGeomTol * scale; }

void fix_edge_flux(const Mesh& mesh, DofMap& dofs, int tag) {
  for (int k = 0; k < mesh.num_edges(); ++k)
    if (mesh.edges[k].tag == tag) dofs.q_fixed[k] = 1;
}

// Coordinate lines with `fine` spacing on [center - n_fine*fine,
// center + n_fine*fine] and geometric growth out to [lo, hi]; the center is
// always a mesh line.
std::vector<Real> band_lines(Real lo, Real hi, Real center, Real half_band, Real fine,
                             Real growth) {
  const int n_fine = static_cast<int>(std::ceil(half_band / fine - 1e-12));
  std::vector<Real> lines;
  for (int k = -n_fine; k <= n_fine; ++k) lines.push_back(center + k * fine);

  std::vector<Real> below;
  Real y = lines.front(), h = fine;
  while (y > lo + 1e-12) {
    h = std::min(h * growth, y - lo);
    if (y - h - lo < 0.5 * h) h = y - lo;
    y -= h;
    below.push_back(y);
  }
  std::vector<Real> out(below.rbegin(), below.rend());
  out.insert(out.end(), lines.begin(), lines.end());
  y = lines.back();
  h = fine;
  while (y < hi - 1e-12) {
    h = std::min(h * growth, hi - y);
    if (hi - y - h < 0.5 * h) h = hi - y;
    y += h;
    out.push_back(y);
  }
  return out;
}

}  // namespace

void Scenario::set_step_values(int step) {
  const Real frac = n_steps > 0 ? static_cast<Real>(step) / n_steps : 1.0;
  for (int dof : ramped_u_dofs) dofs.u_value[dof] = u_target * frac;
}

Scenario build_footing_scenario(const ScenarioConfig& cfg) {
  if (cfg.scenario != ScenarioId::Footing) throw ConfigError("build_footing_scenario: wrong scenario id");
  Scenario sc;
  sc.material = cfg.material;
  sc.material.K *= cfg.permeability_factor;
  switch (cfg.footing_variant) {
    case FootingVariant::DrainedElasticPlastic:
      sc.material.M = 0;
      sc.material.b = 0;
      break;
    case FootingVariant::UndrainedPoroElastic:
      sc.material.s_max = 1e4;
      break;
    case FootingVariant::UndrainedPoroElasticPlastic:
      break;
  }
  sc.material.validate();

  sc.mesh = make_structured_rect(linspace_cells(0, cfg.W / 2, cfg.nx),
                                 linspace_cells(0, cfg.H, cfg.ny));
  sc.mesh.validate();
  sc.cache = FemCache::build(sc.mesh);
  sc.dofs = DofMap::build(sc.mesh);
  sc.tau = cfg.tau;
  sc.n_steps = static_cast<int>(std::llround(cfg.u_total / cfg.u_increment));
  sc.u_target = -cfg.u_total;  // footing presses down

  // Bottom mechanically fixed; left (symmetry) and right fixed horizontally.
  for (const auto& e : sc.mesh.edges) {
    if (e.elem[1] != -1) continue;
    for (int n : {e.n0, e.n1}) {
      if (e.tag == kBottom) {
        sc.dofs.u_fixed[sc.dofs.u_dof(n, 0)] = 1;
        sc.dofs.u_fixed[sc.dofs.u_dof(n, 1)] = 1;
      } else if (e.tag == kLeft || e.tag == kRight) {
        sc.dofs.u_fixed[sc.dofs.u_dof(n, 0)] = 1;
      }
    }
  }
  // Rigid frictionless footing: uniform vertical displacement over a/2.
  for (int n = 0; n < sc.mesh.num_nodes(); ++n) {
    const Vec2& x = sc.mesh.nodes[n];
    if (on_line(x.y(), cfg.H, cfg.H) && x.x() <= cfg.a / 2 + kGeomTol * cfg.W) {
      const int dof = sc.dofs.u_dof(n, 1);
      sc.dofs.u_fixed[dof] = 1;
      sc.ramped_u_dofs.push_back(dof);
      sc.reaction_dofs.push_back(dof);
    }
  }

  // Bottom, left and right impermeable; the top drains unless the undrained
  // boundary variant is requested.
  fix_edge_flux(sc.mesh, sc.dofs, kBottom);
  fix_edge_flux(sc.mesh, sc.dofs, kLeft);
  fix_edge_flux(sc.mesh, sc.dofs, kRight);
  if (!cfg.outer_permeable) fix_edge_flux(sc.mesh, sc.dofs, kTop);

  sc.initial = SolutionState::zero(sc.mesh, sc.dofs);
  return sc;
}

Scenario build_injection_scenario(const ScenarioConfig& cfg) {
  if (cfg.scenario != ScenarioId::Injection) throw ConfigError("build_injection_scenario: wrong scenario id");
  Scenario sc;
  sc.material = cfg.material;
  sc.material.K *= cfg.permeability_factor;
  if (cfg.injection_variant == InjectionVariant::PoroElastic) sc.material.s_max = 1e4;
  sc.material.validate();

  const Real Lh = cfg.L / 2;           // meshed half width
  const Real mid = cfg.L / 2;          // notch line height
  const Real half_band = 8.125;        // refined band half height around the notch
  const int nx = std::max(2, static_cast<int>(std::llround(Lh / cfg.h_fine)));
  const std::vector<Real> xs = linspace_cells(0, Lh, nx);
  const std::vector<Real> ys = band_lines(0, cfg.L, mid, std::min(half_band, cfg.L / 4),
                                          cfg.h_fine, cfg.growth);
  if (ys.size() < 4) throw ConfigError("injection mesh: refinement band outside the domain");

  sc.mesh = make_structured_rect(xs, ys);
  sc.mesh.validate();
  sc.cache = FemCache::build(sc.mesh);

  // The notch: horizontal interior edges on the mid line with x <= a/2.
  std::vector<int> notch_edges;
  Real notch_len = 0;
  for (int k = 0; k < sc.mesh.num_edges(); ++k) {
    const auto& e = sc.mesh.edges[k];
    if (e.elem[1] == -1) continue;
    const Vec2& x0 = sc.mesh.nodes[e.n0];
    const Vec2& x1 = sc.mesh.nodes[e.n1];
    if (!on_line(x0.y(), mid, cfg.L) || !on_line(x1.y(), mid, cfg.L)) continue;
    if (std::max(x0.x(), x1.x()) > cfg.a / 2 + kGeomTol * cfg.L) continue;
    notch_edges.push_back(k);
    notch_len += sc.mesh.edge_length(k);
  }
  if (notch_edges.empty()) throw ConfigError("injection mesh: no notch edges found");

  sc.dofs = DofMap::build(sc.mesh, notch_edges);
  sc.tau = cfg.tau;
  sc.n_steps = cfg.n_steps;
  sc.inject_rate = cfg.inject_rate;

  // All outer edges mechanically fixed; the symmetry edge only horizontally.
  for (const auto& e : sc.mesh.edges) {
    if (e.elem[1] != -1) continue;
    for (int n : {e.n0, e.n1}) {
      if (e.tag == kLeft) {
        sc.dofs.u_fixed[sc.dofs.u_dof(n, 0)] = 1;
      } else {
        sc.dofs.u_fixed[sc.dofs.u_dof(n, 0)] = 1;
        sc.dofs.u_fixed[sc.dofs.u_dof(n, 1)] = 1;
      }
    }
  }
  // Symmetry edge carries no normal flux; outer edges drain freely unless
  // the undrained variant closes them.
  fix_edge_flux(sc.mesh, sc.dofs, kLeft);
  if (!cfg.outer_permeable) {
    fix_edge_flux(sc.mesh, sc.dofs, kRight);
    fix_edge_flux(sc.mesh, sc.dofs, kBottom);
    fix_edge_flux(sc.mesh, sc.dofs, kTop);
  }

  // Prescribed injection: each notch face receives half of the edge's share
  // of the rate, flowing into its element.
  for (int k : notch_edges) {
    const auto& e = sc.mesh.edges[k];
    const Real share = cfg.inject_rate * sc.mesh.edge_length(k) / notch_len;
    for (int which = 0; which < 2; ++which) {
      const int elem = e.elem[which];
      for (int s = 0; s < 4; ++s) {
        if (sc.mesh.elem_edges[elem][s] != k) continue;
        const int dof = sc.dofs.elem_flux_dof[elem][s];
        const int sign = sc.mesh.elem_signs[elem][s];
        sc.dofs.q_fixed[dof] = 1;
        sc.dofs.q_value[dof] = -0.5 * share * sign;  // inflow
      }
    }
  }

  // Phase-field seed d = 1 on the notch nodes.
  for (int n = 0; n < sc.mesh.num_nodes(); ++n) {
    const Vec2& x = sc.mesh.nodes[n];
    if (on_line(x.y(), mid, cfg.L) && x.x() <= cfg.a / 2 + kGeomTol * cfg.L) {
      sc.dofs.d_fixed[n] = 1;
      sc.dofs.d_value[n] = 1.0;
    }
    if (on_line(x.y(), mid, cfg.L)) sc.line_nodes.push_back(n);
  }
  std::sort(sc.line_nodes.begin(), sc.line_nodes.end(), [&](int a, int b) {
    return sc.mesh.nodes[a].x() < sc.mesh.nodes[b].x();
  });

  // Probe element (pressure-volume curve) and the profile row under the line.
  const Vec2 probe(1.0, mid - 0.125);
  Real best = std::numeric_limits<Real>::max();
  for (int e = 0; e < sc.mesh.num_elems(); ++e) {
    Vec2 c = Vec2::Zero();
    for (int a = 0; a < 4; ++a) c += 0.25 * sc.mesh.nodes[sc.mesh.quads[e][a]];
    const Real dist = (c - probe).norm();
    if (dist < best - 1e-12) {
      best = dist;
      sc.probe_elem = e;
    }
    if (c.y() < mid && c.y() > mid - cfg.h_fine) sc.profile_elems.push_back(e);
  }
  std::sort(sc.profile_elems.begin(), sc.profile_elems.end(), [&](int a, int b) {
    Vec2 ca = Vec2::Zero(), cb = Vec2::Zero();
    for (int i = 0; i < 4; ++i) {
      ca += 0.25 * sc.mesh.nodes[sc.mesh.quads[a][i]];
      cb += 0.25 * sc.mesh.nodes[sc.mesh.quads[b][i]];
    }
    return ca.x() < cb.x();
  });

  sc.initial = SolutionState::zero(sc.mesh, sc.dofs);
  impose_phase_field(sc.cache, sc.dofs, sc.initial);
  return sc;
}

Scenario build_custom_scenario(const ScenarioConfig& cfg) {
  if (cfg.scenario != ScenarioId::Custom) throw ConfigError("build_custom_scenario: wrong scenario id");
  Scenario sc;
  sc.material = cfg.material;
  sc.material.K *= cfg.permeability_factor;
  sc.material.validate();

  sc.mesh = make_structured_rect(linspace_cells(0, cfg.W, cfg.nx), linspace_cells(0, cfg.H, cfg.ny));
  sc.mesh.validate();
  sc.cache = FemCache::build(sc.mesh);
  sc.dofs = DofMap::build(sc.mesh);
  sc.tau = cfg.tau;
  sc.n_steps = cfg.n_steps;
  sc.u_target = -cfg.u_total;

  for (const auto& e : sc.mesh.edges) {
    if (e.elem[1] != -1) continue;
    for (int n : {e.n0, e.n1}) {
      if (e.tag == kBottom) {
        sc.dofs.u_fixed[sc.dofs.u_dof(n, 0)] = 1;
        sc.dofs.u_fixed[sc.dofs.u_dof(n, 1)] = 1;
      }
    }
  }
  for (int n = 0; n < sc.mesh.num_nodes(); ++n) {
    if (!on_line(sc.mesh.nodes[n].y(), cfg.H, cfg.H)) continue;
    const int dof = sc.dofs.u_dof(n, 1);
    sc.dofs.u_fixed[dof] = 1;
    sc.ramped_u_dofs.push_back(dof);
    sc.reaction_dofs.push_back(dof);
  }
  if (!cfg.outer_permeable)
    for (int k = 0; k < sc.mesh.num_edges(); ++k)
      if (sc.mesh.edges[k].elem[1] == -1) sc.dofs.q_fixed[k] = 1;

  sc.initial = SolutionState::zero(sc.mesh, sc.dofs);
  return sc;
}

Scenario build_scenario(const ScenarioConfig& cfg) {
  switch (cfg.scenario) {
    case ScenarioId::Footing: return build_footing_scenario(cfg);
    case ScenarioId::Injection: return build_injection_scenario(cfg);
    case ScenarioId::Custom: return build_custom_scenario(cfg);
  }
  throw ConfigError("build_scenario: unknown scenario");
}

}  // namespace porofrac::app
