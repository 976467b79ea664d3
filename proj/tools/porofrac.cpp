#include <CLI11.hpp>
#include <iostream>

#include "porofrac/app/run.hpp"

using namespace porofrac;

int main(int argc, char** argv) {
  CLI::App app{"porofrac: phase-field hydraulic fracturing of porous elastic-plastic solids"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  int threads = 0;
  bool desk = false;

  auto* run_cmd = app.add_subcommand("run", "run a scenario from a config file");
  run_cmd->add_option("config", config_path, "config file")->required();
  run_cmd->add_option("--output-dir", output_dir, "override output directory");
  run_cmd->add_option("--threads", threads, "element-kernel threads");
  run_cmd->add_flag("--desk", desk, "swap the paper mesh for a coarse desk mesh");

  auto* validate_cmd = app.add_subcommand("validate", "parse and validate a config file");
  validate_cmd->add_option("config", config_path, "config file")->required();

  auto* scenarios_cmd = app.add_subcommand("scenarios", "list built-ins and emit template configs");
  scenarios_cmd->add_option("--output-dir", output_dir, "where to write the templates");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      app::ScenarioConfig cfg = app::parse_config_file(config_path);
      if (desk) app::apply_desk_preset(cfg);
      if (threads > 0) {
        cfg.threads = threads;
        cfg.resolved["threads"] = std::to_string(threads);
      }
      if (!output_dir.empty()) {
        cfg.output_dir = output_dir;
        cfg.resolved["output_dir"] = output_dir;
      }
      const app::RunResult result = app::run(cfg);
      if (result.exit_code != 0) {
        std::cerr << "step " << result.failed_step << " failed: " << result.error << "\n"
                  << "partial outputs retained in " << cfg.output_dir << "\n";
        return result.exit_code;
      }
      std::cout << "completed " << result.steps_done << " steps, t = " << result.final_time
                << " s, outputs in " << cfg.output_dir << "\n";
      return 0;
    }
    if (validate_cmd->parsed()) {
      app::parse_config_file(config_path);
      std::cout << "config ok\n";
      return 0;
    }
    if (scenarios_cmd->parsed()) {
      const std::string dir = output_dir.empty() ? "." : output_dir;
      app::ensure_directory(dir);
      app::atomic_write(dir + "/footing.cfg", app::footing_template());
      app::atomic_write(dir + "/injection.cfg", app::injection_template());
      std::cout << "built-in scenarios:\n"
                << "  footing    rigid footing on a porous elastic-plastic half space\n"
                << "  injection  fluid injection into a notched square domain\n"
                << "  custom     rectangle with bottom clamp and top displacement ramp\n"
                << "templates written to " << dir << "/footing.cfg and " << dir
                << "/injection.cfg\n";
      return 0;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
