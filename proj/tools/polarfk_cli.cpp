#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "polarfk/errors.hpp"
#include "polarfk/runner.hpp"

int main(int argc, char** argv) {
  using namespace polarfk;
  CLI::App app{"Polarization and first p-Laplacian eigenvalues on punctured planar domains"};
  app.require_subcommand(1);

  std::string config_path;
  RunOverrides ov;
  std::string out;
  double p = 0.0;
  int grid_n = 0;
  for (const char* name : {"solve", "fk-check", "translate-sweep", "rotate-sweep", "annulus-study",
                           "symmetry-check"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run a ") + name + " scenario");
    sub->add_option("--config", config_path, "scenario file (JSON)")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_option("--p", p, "p-Laplacian exponent");
    sub->add_option("--grid-n", grid_n, "cells per unit length");
  }
  CLI11_PARSE(app, argc, argv);

  const CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--out")) ov.out_dir = out;
  if (sub->count("--p")) ov.p = p;
  if (sub->count("--grid-n")) ov.grid_n = grid_n;

  ScenarioConfig cfg;
  try {
    cfg = apply_overrides(load_config(config_path), ov);
    if (sub->get_name() != to_string(cfg.kind))
      throw ValidationError("kind: config is \"" + std::string(to_string(cfg.kind)) +
                            "\" but the subcommand is \"" + sub->get_name() + "\"");
  } catch (const Error& e) {
    std::cerr << "polarfk: " << e.kind() << ": " << e.what() << '\n';
    return dynamic_cast<const IoError*>(&e) ? kExitIo : kExitConfig;
  }
  return run(cfg, std::cerr);
}
