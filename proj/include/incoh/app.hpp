// Command-line front end: configuration loading and the subcommands.
#pragma once

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>

#include "incoh/experiment.hpp"

namespace incoh::app {

/// Any configuration problem. The message names the file or field.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  ExperimentSetup setup;
  std::string model = "both";  // incoherent | decoherent | both
  std::filesystem::path out_dir = "out";
  bool deterministic = true;
  /// Fully resolved configuration (defaults applied), as canonical JSON.
  std::string resolved_json;
  /// SHA-256 of resolved_json, hex.
  std::string digest;
};

/// Parses JSON text (comments allowed). Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<string>");

ExperimentConfig load_config(const std::filesystem::path& path);

ExperimentConfig default_config();

std::string sha256_hex(const std::string& data);

struct RunRequest {
  std::string model;            // empty: use the config
  std::filesystem::path config; // empty: defaults
  std::filesystem::path out;    // empty: use the config
};

/// Writes decay_<model>.csv, spectrum_<model>_<comp>.csv and summary.txt.
/// Returns the process exit status.
int run_command(const RunRequest& req, std::ostream& out, std::ostream& err);

struct CycleCheckRequest {
  double z = 1.0;
  int cycle = 8;
  SimulationMode mode = SimulationMode::GateLevel;
  double tolerance = 1e-9;
};

/// Frobenius distance of S(G_z)^cycle from the identity.
double cycle_residual(const CycleCheckRequest& req, const SpinSystem& sys);

int cyclecheck_command(const CycleCheckRequest& req, std::ostream& out);

int describe_command(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

}  // namespace incoh::app
