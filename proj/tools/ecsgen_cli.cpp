// ecsgen: run, sweep and validate the two-mode entangled coherent state protocol.
//
//   ecsgen run      [--config FILE] [--mode idealized|full] [--seed N] [--out FILE]
//   ecsgen sweep    [--config FILE] [--axis A] [--grid v1,v2,...] [--out FILE]
//   ecsgen timing   [--config FILE]
//   ecsgen validate [--config FILE] [--filter NAME] [--seed N] [--out DIR]
//
// Exit codes: 0 success, 1 validation (or run) failure, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ecsgen.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw ecsgen::ConfigError("bad grid value '" + item + "'");
    grid.push_back(v);
  }
  if (grid.empty()) throw ecsgen::ConfigError("--grid is empty");
  return grid;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ecsgen::ConfigError("cannot write '" + out_path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entangled coherent states of two LC modes via a flux qubit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  app.add_option("--config", config_path, "JSON config file (default: $ECSGEN_CONFIG)");
  app.add_option("--mode", mode, "idealized or full")->check(CLI::IsMember({"idealized", "full"}));
  app.add_option("--seed", seed, "seed for sampled readout and randomized checks");
  app.add_option("--out", out_path, "output file (run, sweep) or directory (validate)");

  auto* run_cmd = app.add_subcommand("run", "run the protocol once, print a JSON report");
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter, print CSV");
  std::string axis;
  std::string grid_text;
  sweep_cmd->add_option("--axis", axis, "kappa0, phi, alpha_im or delta_pulse");
  sweep_cmd->add_option("--grid", grid_text, "comma-separated grid values");
  auto* timing_cmd = app.add_subcommand("timing", "print pulse and free-evolution times");
  auto* validate_cmd = app.add_subcommand("validate", "run the acceptance criteria");
  std::string filter;
  validate_cmd->add_option("--filter", filter, "criterion number or name substring");

  // Global flags may also follow the subcommand.
  for (auto* sub : {run_cmd, sweep_cmd, timing_cmd, validate_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  ecsgen::RunConfig cfg;
  try {
    cfg = ecsgen::load_config_or_default(config_path.empty() ? std::nullopt : std::optional(config_path));
    if (!mode.empty()) cfg.spec.mode = ecsgen::parse_mode(mode);
    if (seed) cfg.spec.seed = *seed;
    if (!axis.empty()) cfg.sweep.axis = ecsgen::parse_sweep_axis(axis);
    if (!grid_text.empty()) cfg.sweep.grid = parse_grid(grid_text);
  } catch (const std::exception& e) {
    std::cerr << "ecsgen: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*run_cmd) {
      const ecsgen::ProtocolReport rep = ecsgen::run_protocol(cfg.spec);
      emit(ecsgen::run_document(cfg.spec, rep).dump(2) + "\n", out_path);
      std::cerr << "wall clock: " << rep.wall_seconds << " s\n";
      for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
      return kExitOk;
    }
    if (*sweep_cmd) {
      const auto rows = ecsgen::sweep(cfg.spec, cfg.sweep.axis, cfg.sweep.grid, cfg.sweep.threads);
      emit(ecsgen::sweep_csv(cfg.sweep.axis, rows, cfg.sweep.branch), out_path);
      return kExitOk;
    }
    if (*timing_cmd) {
      const ecsgen::TimingReport t = ecsgen::timing_report(cfg.spec.params);
      ecsgen::ordered_json j = {{"t_p", t.t_p}, {"t_free", t.t_free}};
      emit(j.dump(2) + "\n", out_path);
      return kExitOk;
    }
    if (*validate_cmd) {
      ecsgen::acceptance::Options opt;
      opt.tail_tol = cfg.spec.tail_tol;
      opt.seed = cfg.spec.seed;
      opt.filter = filter;
      if (!out_path.empty()) opt.out_dir = out_path;
      const auto results = ecsgen::acceptance::run_all(opt, std::cout);
      if (results.empty()) {
        std::cerr << "ecsgen: no criterion matches filter '" << filter << "'\n";
        return kExitUsage;
      }
      const bool ok = ecsgen::acceptance::all_passed(results);
      std::cout << (ok ? "all criteria passed" : "some criteria FAILED") << '\n';
      return ok ? kExitOk : kExitFailure;
    }
  } catch (const ecsgen::ConfigError& e) {
    std::cerr << "ecsgen: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "ecsgen: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
