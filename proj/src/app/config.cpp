#include "porofrac/app/config.hpp"

#include <fstream>
#include <sstream>

#include "porofrac/errors.hpp"

namespace porofrac::app {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Real to_real(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const Real x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const Real x = to_real(key, v);
  const int i = static_cast<int>(std::llround(x));
  if (std::abs(x - i) > 1e-9) throw ConfigError("config: key '" + key + "' expects an integer");
  return i;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: key '" + key + "' expects true/false");
}

}  // namespace

void ScenarioConfig::validate() const {
  material.validate();
  if (tau <= 0) throw ConfigError("config: tau must be positive");
  if (permeability_factor <= 0) throw ConfigError("config: permeability_factor must be positive");
  if (threads < 1) throw ConfigError("config: threads must be >= 1");
  if (output_every < 0) throw ConfigError("config: output_every must be >= 0");
  switch (scenario) {
    case ScenarioId::Footing:
      if (W <= 0 || H <= 0 || a <= 0 || a > W) throw ConfigError("config: footing geometry invalid");
      if (nx < 2 || ny < 1) throw ConfigError("config: footing mesh too coarse");
      if (u_increment <= 0 || u_total <= 0 || u_total < u_increment)
        throw ConfigError("config: footing loading invalid");
      break;
    case ScenarioId::Injection:
      if (L <= 0 || a <= 0 || a > L) throw ConfigError("config: injection geometry invalid");
      if (h_fine <= 0 || h_fine > L / 4) throw ConfigError("config: injection band size invalid");
      if (growth <= 1.0) throw ConfigError("config: growth must exceed 1");
      if (n_steps < 1) throw ConfigError("config: injection needs n_steps >= 1");
      if (inject_rate < 0) throw ConfigError("config: inject_rate must be >= 0");
      break;
    case ScenarioId::Custom:
      if (W <= 0 || H <= 0) throw ConfigError("config: custom geometry invalid");
      if (nx < 1 || ny < 1) throw ConfigError("config: custom mesh invalid");
      if (n_steps < 1) throw ConfigError("config: custom needs n_steps >= 1");
      break;
  }
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key or value");
    cfg.resolved[key] = val;

    MaterialParams& m = cfg.material;
    if (key == "scenario") {
      if (val == "footing") cfg.scenario = ScenarioId::Footing;
      else if (val == "injection") cfg.scenario = ScenarioId::Injection;
      else if (val == "custom") cfg.scenario = ScenarioId::Custom;
      else throw ConfigError("config: unknown scenario '" + val + "'");
    } else if (key == "variant") {
      if (val == "drained_elastic_plastic") cfg.footing_variant = FootingVariant::DrainedElasticPlastic;
      else if (val == "undrained_poro_elastic") cfg.footing_variant = FootingVariant::UndrainedPoroElastic;
      else if (val == "undrained_poro_elastic_plastic")
        cfg.footing_variant = FootingVariant::UndrainedPoroElasticPlastic;
      else if (val == "poro_elastic") cfg.injection_variant = InjectionVariant::PoroElastic;
      else if (val == "poro_elastic_plastic") cfg.injection_variant = InjectionVariant::PoroElasticPlastic;
      else throw ConfigError("config: unknown variant '" + val + "'");
    } else if (key == "driving_force") {
      if (val == "hardening_energy") m.driving_force_mode = DrivingForceMode::HardeningEnergy;
      else if (val == "plastic_work") m.driving_force_mode = DrivingForceMode::PlasticWork;
      else throw ConfigError("config: unknown driving_force '" + val + "'");
    } else if (key == "boundary_variant") {
      if (val == "permeable") cfg.outer_permeable = true;
      else if (val == "impermeable") cfg.outer_permeable = false;
      else throw ConfigError("config: unknown boundary_variant '" + val + "'");
    } else if (key == "permeability_factor") cfg.permeability_factor = to_real(key, val);
    else if (key == "W") cfg.W = to_real(key, val);
    else if (key == "H") cfg.H = to_real(key, val);
    else if (key == "a") cfg.a = to_real(key, val);
    else if (key == "L") cfg.L = to_real(key, val);
    else if (key == "nx") cfg.nx = to_int(key, val);
    else if (key == "ny") cfg.ny = to_int(key, val);
    else if (key == "h_fine") cfg.h_fine = to_real(key, val);
    else if (key == "growth") cfg.growth = to_real(key, val);
    else if (key == "tau") cfg.tau = to_real(key, val);
    else if (key == "n_steps") cfg.n_steps = to_int(key, val);
    else if (key == "u_increment") cfg.u_increment = to_real(key, val);
    else if (key == "u_total") cfg.u_total = to_real(key, val);
    else if (key == "inject_rate") cfg.inject_rate = to_real(key, val);
    else if (key == "lambda") m.lambda = to_real(key, val);
    else if (key == "G") m.G = to_real(key, val);
    else if (key == "h") m.h = to_real(key, val);
    else if (key == "sigma_y") m.sigma_y = to_real(key, val);
    else if (key == "omega") m.omega = to_real(key, val);
    else if (key == "eta_p") m.eta_p = to_real(key, val);
    else if (key == "q1") m.q1 = to_real(key, val);
    else if (key == "M_phi") m.M_phi = to_real(key, val);
    else if (key == "s_max") m.s_max = to_real(key, val);
    else if (key == "M") m.M = to_real(key, val);
    else if (key == "b") m.b = to_real(key, val);
    else if (key == "eta_f") m.eta_f = to_real(key, val);
    else if (key == "K") m.K = to_real(key, val);
    else if (key == "rho_f") m.rho_f = to_real(key, val);
    else if (key == "psi_c") m.psi_c = to_real(key, val);
    else if (key == "l") m.l = to_real(key, val);
    else if (key == "k") m.k = to_real(key, val);
    else if (key == "eps_interp") m.eps_interp = to_real(key, val);
    else if (key == "porosity" || key == "rho_s" || key == "m0") {
      // accepted for completeness of the parameter set; no equation uses them
    } else if (key == "output_dir") cfg.output_dir = val;
    else if (key == "output_every") cfg.output_every = to_int(key, val);
    else if (key == "threads") cfg.threads = to_int(key, val);
    else if (key == "desk") {
      if (to_bool(key, val)) apply_desk_preset(cfg);
    } else {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void apply_desk_preset(ScenarioConfig& cfg) {
  if (cfg.scenario == ScenarioId::Footing) {
    // ~150 elements; same total displacement, larger increments, same
    // total consolidation time.
    const Real t_total = cfg.tau * std::llround(cfg.u_total / cfg.u_increment);
    cfg.nx = 25;
    cfg.ny = 6;
    cfg.u_increment = cfg.u_total / 50;
    cfg.tau = t_total / 50;
    cfg.resolved["desk"] = "true";
  } else if (cfg.scenario == ScenarioId::Injection) {
    const Real t_total = cfg.tau * cfg.n_steps;
    cfg.h_fine = 1.0;
    cfg.n_steps = 1800;
    cfg.tau = t_total / cfg.n_steps;
    cfg.resolved["desk"] = "true";
  }
}

std::string footing_template() {
  return R"(# rigid footing on a porous elastic-plastic half space (plane strain)
scenario = footing
variant = undrained_poro_elastic_plastic   # drained_elastic_plastic | undrained_poro_elastic | undrained_poro_elastic_plastic
permeability_factor = 1.0                  # scales K (study used 0.2, 1, 5)
boundary_variant = permeable               # top drainage; bottom/left/right stay impermeable

# geometry (m); half of W is meshed
W = 23.088
H = 4.758
a = 4.587

# mesh (cells across half width x height)
nx = 66
ny = 36

# loading: footing displacement ramps linearly (m per step, total m)
u_increment = 5.0e-6
u_total = 0.0023
tau = 2.0e4                                # s per step (consolidation scale)

# material (Lame constants and moduli in MN/m^2 unless noted)
lambda = 1.8e5
G = 3.1e4
h = 0.035
sigma_y = 0.1
omega = 2.0
eta_p = 5.0e-6                             # s
q1 = 0.04
M_phi = 0.6
s_max = 4.0
M = 2.5e4
b = 0.5
eta_f = 1.0e-3                             # Ns/m^2
K = 9.8e-12                                # m^3 s/kg
rho_f = 1000.0                             # kg/m^3
psi_c = 1.0e6                              # fracture disabled at this threshold
l = 0.5                                    # m
k = 1.0e-5
eps_interp = 50

output_dir = out_footing
output_every = 0                           # VTK cadence in steps (0 = final only)
threads = 1
)";
}

std::string injection_template() {
  return R"(# fluid injection into a notched square domain (plane strain, half model)
scenario = injection
variant = poro_elastic_plastic             # poro_elastic | poro_elastic_plastic
driving_force = plastic_work               # hardening_energy | plastic_work
boundary_variant = permeable               # outer edges fixed and permeable

# geometry (m)
L = 80.0
a = 8.0                                    # notch length (a/2 in the half model)

# mesh: band around the notch at h_fine, geometric grading outside
h_fine = 0.25
growth = 1.6

# injection schedule
inject_rate = 0.01                         # kg/s over the notch faces
tau = 1.0e-3                               # s
n_steps = 90000

# material (MN/m^2 unless noted)
lambda = 1.8e5
G = 3.1e4
h = 5.0
sigma_y = 0.1
omega = 2.0
eta_p = 5.0e-6                             # s
q1 = 2.0e-5
M_phi = 1.8
s_max = 2.0e-3
M = 2.5e4
b = 0.5
eta_f = 1.0e-3                             # Ns/m^2
K = 9.8e-12                                # m^3 s/kg
rho_f = 1000.0                             # kg/m^3
psi_c = 5.0e-8
l = 0.5                                    # m
k = 1.0e-5
eps_interp = 50

output_dir = out_injection
output_every = 0
threads = 1
)";
}

}  // namespace porofrac::app
