// ghw — Goos-Haenchen shifts and Wigner time delays of 2D vortex wavepackets
// scattered by potential barriers (step, delta, rectangular).
//
// Subcommands:
//   single    evaluate one configuration point, write a one-row CSV
//   sweep     angle sweep from a JSON config
//   figure    canonical datasets (2a 2b 2c 2d 4 5 6 7) + gnuplot script
//   validate  built-in validation battery (fast|full)
//
// Units are natural, hbar = m = 1; angles are degrees at this interface.
// Exit codes: 0 success, 1 usage error, 2 validation failure, 3 numerical error.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ghw/config.hpp"
#include "ghw/figures.hpp"
#include "ghw/oracle.hpp"
#include "ghw/sweep.hpp"
#include "ghw/validate.hpp"

namespace {

struct ModeFlags {
  std::string amplitude;   // exact|taylor
  std::string kinematics;  // full|simplified
  std::string grid;        // NxM
  int threads = 0;
};

void apply_overrides(ghw::ScenarioConfig& cfg, const ModeFlags& f) {
  if (!f.amplitude.empty()) {
    if (f.amplitude != "exact" && f.amplitude != "taylor")
      throw CLI::ValidationError("--mode must be exact or taylor");
    cfg.mode.amplitude = f.amplitude == "exact" ? ghw::AmplitudeModel::Exact
                                                : ghw::AmplitudeModel::FirstOrderTaylor;
  }
  if (!f.kinematics.empty()) {
    if (f.kinematics != "full" && f.kinematics != "simplified")
      throw CLI::ValidationError("--kinematics must be full or simplified");
    cfg.mode.kinematics =
        f.kinematics == "full" ? ghw::KinematicsModel::Full : ghw::KinematicsModel::Simplified;
  }
  if (!f.grid.empty()) {
    const auto x = f.grid.find('x');
    if (x == std::string::npos) throw CLI::ValidationError("--grid must look like 257x257");
    cfg.grid.nx = std::stoi(f.grid.substr(0, x));
    cfg.grid.ny = std::stoi(f.grid.substr(x + 1));
  }
  if (f.threads > 0) cfg.threads = f.threads;
  cfg.validate();
}

void write_output(const ghw::SweepResult& res, const std::string& out_flag) {
  const std::string path = !out_flag.empty() ? out_flag : res.config.output_path;
  if (path.empty() || path == "-") {
    ghw::write_sweep_csv(res, std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::invalid_argument("cannot open output file: " + path);
  ghw::write_sweep_csv(res, os);
  std::cerr << "wrote " << path << "\n";
}

void print_warnings(const ghw::ScenarioConfig& cfg) {
  const auto pkt = cfg.packet_at(cfg.sweep.theta_start_deg * ghw::pi / 180.0);
  for (const auto& w : pkt.warnings(&cfg.barrier)) std::cerr << "warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goos-Haenchen shifts and Wigner time delays of 2D vortex wavepackets"};
  app.require_subcommand(1);

  std::string config_path, out_path, figure_id, level = "fast";
  ModeFlags flags;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON scenario config")->required();
    cmd->add_option("--out", out_path, "output CSV path ('-' for stdout)");
    cmd->add_option("--mode", flags.amplitude, "amplitude model: exact|taylor");
    cmd->add_option("--kinematics", flags.kinematics, "kinematic map: full|simplified");
    cmd->add_option("--grid", flags.grid, "spectral grid, e.g. 257x257");
    cmd->add_option("--threads", flags.threads, "worker threads");
  };

  CLI::App* single = app.add_subcommand("single", "evaluate one point");
  add_common(single);
  CLI::App* sweep = app.add_subcommand("sweep", "angle sweep");
  add_common(sweep);

  CLI::App* figure = app.add_subcommand("figure", "canonical datasets");
  figure->add_option("--figure", figure_id, "dataset id: 2a 2b 2c 2d 4 5 6 7")->required();
  figure->add_option("--out", out_path, "output CSV path")->required();

  CLI::App* validate = app.add_subcommand("validate", "validation battery");
  validate->add_option("--level", level, "fast|full")->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*single || *sweep) {
      ghw::ScenarioConfig cfg = ghw::load_config(config_path);
      apply_overrides(cfg, flags);
      if (*single) cfg.sweep.n_points = 1;
      print_warnings(cfg);
      write_output(ghw::run_sweep(cfg), out_path);
    } else if (*figure) {
      const auto cfg = ghw::emit_figure_dataset(figure_id, out_path);
      std::cerr << "wrote " << out_path << " and " << out_path << ".gp (config hash "
                << ghw::config_hash(cfg) << ")\n";
    } else if (*validate) {
      const auto rep = ghw::validate_suite(
          level == "full" ? ghw::ValidateLevel::Full : ghw::ValidateLevel::Fast, &std::cout);
      if (!rep.pass) return 2;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
