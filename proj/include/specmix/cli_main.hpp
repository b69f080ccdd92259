#pragma once

// Argument parsing for the `specmix` executable (CLI11).

#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "specmix/cli.hpp"

namespace specmix {

/// Parses argv, runs the subcommand and returns its exit code.
inline int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Spectral independence and Glauber mixing checks for list colourings"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--cap", cfg.cap, "enumeration cap (colourings visited)");
    sub->add_option("--matrix-cap", cfg.matrix_cap, "largest Glauber state space");
    sub->add_option("--tol-enum", cfg.tol.enumeration, "enumeration tolerance");
    sub->add_option("--tol-balance", cfg.tol.balance, "detailed balance tolerance");
    sub->add_option("--tol-spectral", cfg.tol.spectral, "spectral tolerance");
    sub->add_option("--tol-gelfand", cfg.tol.gelfand, "Gelfand estimate tolerance");
    sub->add_option("--format", cfg.format, "json or csv");
    sub->add_flag("--golden", cfg.golden, "omit timing fields");
  };

  auto* verify = app.add_subcommand("verify", "run the invariant suite on a corpus or one instance");
  verify->add_option("--corpus", cfg.corpus, "small or full");
  verify->add_option("--instance", cfg.instance_path, "instance JSON file");
  verify->add_option("--delta", cfg.delta, "delta for the colouring bounds");
  common(verify);

  auto* influence = app.add_subcommand("influence", "pairwise influence matrix under a pinning");
  influence->add_option("--instance", cfg.instance_path)->required();
  influence->add_option("--pin", cfg.pin_spec, "v=c,v=c,...");
  influence->add_option("--convention", cfg.convention, "psi or r");
  common(influence);

  auto* local = app.add_subcommand("localwalk", "local random walk checks for one pinning");
  local->add_option("--instance", cfg.instance_path)->required();
  local->add_option("--pin", cfg.pin_spec, "v=c,v=c,...");
  local->add_option("--t-max", cfg.t_max, "largest coupling horizon");
  common(local);

  auto* glauber = app.add_subcommand("glauber", "run the Glauber chain and its exact TV curve");
  glauber->add_option("--instance", cfg.instance_path)->required();
  glauber->add_option("--steps", cfg.steps, "chain steps to print");
  glauber->add_option("--seed", cfg.seed, "RNG seed");
  glauber->add_option("--exact-curve", cfg.exact_curve, "print worst-start TV for t = 0..T");
  common(glauber);

  std::vector<int> pair;
  auto* bounds = app.add_subcommand("bounds", "colouring condition and influence bounds");
  bounds->add_option("--instance", cfg.instance_path)->required();
  bounds->add_option("--delta", cfg.delta);
  bounds->add_option("--chi", cfg.chi, "degree bound (default: maximum degree)");
  bounds->add_option("--saw", cfg.saw_source, "source vertex for the walk bound");
  bounds->add_option("--pair", pair, "u v")->expected(2);
  common(bounds);

  auto* star = app.add_subcommand("star", "star tightness table");
  star->add_option("--delta-min", cfg.delta_min);
  star->add_option("--delta-max", cfg.delta_max)->required();
  common(star);

  auto* fcheck = app.add_subcommand("fcheck", "monotonicity of f on a grid");
  fcheck->add_option("--delta", cfg.delta)->required();
  fcheck->add_option("--grid", cfg.grid, "lo:hi:log[:N] or lo:hi:lin:N");
  common(fcheck);

  auto* gen = app.add_subcommand("gen", "generate an instance from a family spec");
  gen->add_option("--family", cfg.family)->required();
  gen->add_option("--out", cfg.out_path);
  common(gen);

  bool csv_given = false;
  try {
    app.parse(argc, argv);
  } catch (const CLI::Error& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  for (auto* sub : app.get_subcommands()) {
    cfg.subcommand = sub->get_name();
    csv_given = sub->count("--format") > 0;
  }
  if (cfg.subcommand == "glauber" && !csv_given) cfg.format = "csv";
  if (pair.size() == 2) cfg.pair = std::make_pair(pair[0], pair[1]);

  try {
    apply_environment(cfg);
  } catch (const Error& e) {
    err << "specmix: " << e.what() << '\n';
    return 1;
  }
  return run(cfg, out, err);
}

}  // namespace specmix
