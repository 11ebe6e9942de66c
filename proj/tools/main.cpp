// CLI front end for the border-defense game solver and simulator.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bddg/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Border-defense pursuit-evasion: closed-form solver, simulator, and verifier"};
  app.require_subcommand(1);

  std::string path;
  std::string pursuer_policy = "optimal";
  std::string evader_policy = "optimal";
  std::string out_path;
  std::string events_path;
  bool game_of_kind_fallback = false;
  int samples = 1000;
  std::optional<std::uint64_t> seed;
  double resolution = 1e-3;

  auto* solve = app.add_subcommand("solve", "Assignments, Value, aimpoints, game-of-kind verdict");
  solve->add_option("scenario", path, "scenario JSON file")->required();

  auto* enumerate = app.add_subcommand("enumerate", "List all candidate assignments");
  enumerate->add_option("scenario", path, "scenario JSON file")->required();

  auto* simulate = app.add_subcommand("simulate", "Run one engagement under a policy pair");
  simulate->add_option("scenario", path, "scenario JSON file")->required();
  simulate->add_option("--pursuer-policy", pursuer_policy, "pursuer team policy");
  simulate->add_option("--evader-policy", evader_policy, "evader team policy");
  simulate->add_option("--out", out_path, "trajectory CSV output path");
  simulate->add_option("--events-out", events_path, "events JSON output path");
  simulate->add_flag("--game-of-kind", game_of_kind_fallback,
                     "simulate the best partial defense when the pursuers cannot win");

  auto* verify = app.add_subcommand("verify", "HJI / gradient / identity checks on sampled states");
  verify->add_option("scenario", path, "scenario JSON file")->required();
  verify->add_option("--samples", samples, "number of sampled states");
  verify->add_option("--seed", seed, "RNG seed (defaults to the scenario's)");

  auto* oracle = app.add_subcommand("oracle", "Closed form vs. grid brute force");
  oracle->add_option("scenario", path, "scenario JSON file")->required();
  oracle->add_option("--resolution", resolution, "grid resolution");

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) return bddg::cli::cmd_solve(path, std::cout, std::cerr);
  if (enumerate->parsed()) return bddg::cli::cmd_enumerate(path, std::cout, std::cerr);
  if (simulate->parsed())
    return bddg::cli::cmd_simulate(path, pursuer_policy, evader_policy, out_path, events_path,
                                   game_of_kind_fallback, std::cout, std::cerr);
  if (verify->parsed()) return bddg::cli::cmd_verify(path, samples, seed, std::cout, std::cerr);
  if (oracle->parsed()) return bddg::cli::cmd_oracle(path, resolution, std::cout, std::cerr);
  return bddg::cli::kExitInput;
}
