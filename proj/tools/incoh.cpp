#include <iostream>

#include <CLI11.hpp>

#include "incoh/app.hpp"

int main(int argc, char** argv) {
  CLI::App cli{"Incoherent vs decoherent fidelity-decay simulator"};
  cli.require_subcommand(1);

  incoh::app::RunRequest run;
  std::string config_path;
  std::string out_path;
  auto* run_cmd = cli.add_subcommand("run", "simulate the decay and write CSV output");
  run_cmd->add_option("--model", run.model, "incoherent, decoherent or both")
      ->check(CLI::IsMember({"incoherent", "decoherent", "both"}));
  run_cmd->add_option("--config", config_path, "JSON config (comments allowed)");
  run_cmd->add_option("--out", out_path, "output directory");

  incoh::app::CycleCheckRequest check;
  std::string mode = "gate";
  auto* check_cmd = cli.add_subcommand("cyclecheck", "check that the entangler has period 8");
  check_cmd->add_option("--z", check.z, "carbon rf scale factor")->check(CLI::PositiveNumber);
  check_cmd->add_option("--cycle", check.cycle, "candidate period")->check(CLI::PositiveNumber);
  check_cmd->add_option("--mode", mode, "gate or pulse")->check(CLI::IsMember({"gate", "pulse"}));

  std::string describe_config;
  auto* describe_cmd = cli.add_subcommand("describe", "print the circuit plan and resolved config");
  describe_cmd->add_option("--config", describe_config, "JSON config");

  CLI11_PARSE(cli, argc, argv);

  if (*run_cmd) {
    run.config = config_path;
    run.out = out_path;
    return incoh::app::run_command(run, std::cout, std::cerr);
  }
  if (*check_cmd) {
    check.mode = mode == "pulse" ? incoh::SimulationMode::PulseLevel : incoh::SimulationMode::GateLevel;
    return incoh::app::cyclecheck_command(check, std::cout);
  }
  return incoh::app::describe_command(describe_config, std::cout, std::cerr);
}
