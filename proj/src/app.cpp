#include "incoh/app.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

namespace incoh::app {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config." + field + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.contains(key)) fail(where.empty() ? key : where + "." + key, "unknown key");
  }
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<int>();
}

bool get_bool(const json& j, const std::string& field) {
  if (!j.is_boolean()) fail(field, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected a string");
  return j.get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

void parse_spin_system(const json& j, SpinSystem& sys) {
  if (!j.is_object()) fail("spin_system", "expected an object");
  reject_unknown(j, "spin_system", {"frequencies_hz", "couplings_hz", "t1_s", "t2_s"});
  if (j.contains("frequencies_hz")) sys.frequencies_hz = get_numbers(j["frequencies_hz"], "spin_system.frequencies_hz");
  if (j.contains("t1_s")) sys.t1_s = get_numbers(j["t1_s"], "spin_system.t1_s");
  if (j.contains("t2_s")) sys.t2_s = get_numbers(j["t2_s"], "spin_system.t2_s");
  if (j.contains("couplings_hz")) {
    const json& c = j["couplings_hz"];
    if (!c.is_array()) fail("spin_system.couplings_hz", "expected a square array of arrays");
    const auto n = static_cast<Eigen::Index>(c.size());
    sys.couplings_hz = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto row = get_numbers(c[static_cast<std::size_t>(r)], "spin_system.couplings_hz[" + std::to_string(r) + "]");
      if (static_cast<Eigen::Index>(row.size()) != n) fail("spin_system.couplings_hz", "matrix is not square");
      for (Eigen::Index k = 0; k < n; ++k) sys.couplings_hz(r, k) = row[static_cast<std::size_t>(k)];
    }
  }
  try {
    sys.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config.") + e.what());
  }
}

void parse_distribution(const json& j, RfDistribution& dist) {
  if (j.is_string()) {
    if (j.get<std::string>() != "default") fail("rf_distribution", "expected \"default\" or an object");
    dist = default_rf_distribution();
    return;
  }
  if (!j.is_object()) fail("rf_distribution", "expected \"default\" or an object");
  reject_unknown(j, "rf_distribution", {"points", "weights"});
  if (!j.contains("points") || !j.contains("weights")) fail("rf_distribution", "needs both points and weights");
  dist.points = get_numbers(j["points"], "rf_distribution.points");
  dist.weights = get_numbers(j["weights"], "rf_distribution.weights");
  try {
    dist.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config.") + e.what());
  }
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

// Physics-relevant settings only; output location does not enter the digest.
json resolved(const ExperimentConfig& cfg) {
  const ExperimentSetup& s = cfg.setup;
  json j;
  j["spin_system"] = {{"frequencies_hz", s.sys.frequencies_hz},
                      {"couplings_hz", matrix_json(s.sys.couplings_hz)},
                      {"t1_s", s.sys.t1_s},
                      {"t2_s", s.sys.t2_s}};
  j["rf_distribution"] = {{"points", s.dist.points}, {"weights", s.dist.weights}};
  j["model"] = cfg.model;
  j["n_max"] = s.n_max;
  j["relaxation"] = s.noise.relaxation;
  j["mode"] = s.noise.mode == SimulationMode::GateLevel ? "gate" : "pulse";
  j["iteration_duration_s"] = s.noise.iteration_duration_s;
  j["refocus_cycles"] = s.noise.pulse.refocus_cycles;
  j["noisy_prep_readout"] = s.noisy_prep_readout;
  return j;
}

void finalize(ExperimentConfig& cfg) {
  cfg.resolved_json = resolved(cfg).dump();
  cfg.digest = sha256_hex(cfg.resolved_json);
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  finalize(cfg);
  return cfg;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  json j;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    j = json::object();
  } else {
    try {
      j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
      throw ConfigError("config: cannot parse '" + source + "': " + e.what());
    }
  }
  if (!j.is_object()) throw ConfigError("config: top level of '" + source + "' must be an object");
  reject_unknown(j, "", {"spin_system", "rf_distribution", "model", "n_max", "relaxation", "mode",
                         "iteration_duration_s", "refocus_cycles", "noisy_prep_readout", "output_dir",
                         "deterministic"});

  ExperimentConfig cfg;
  ExperimentSetup& s = cfg.setup;
  if (j.contains("spin_system")) parse_spin_system(j["spin_system"], s.sys);
  if (j.contains("rf_distribution")) parse_distribution(j["rf_distribution"], s.dist);
  if (j.contains("model")) {
    cfg.model = get_string(j["model"], "model");
    if (cfg.model != "both") {
      try {
        (void)parse_noise_model(cfg.model);
      } catch (const std::invalid_argument& e) {
        fail("model", e.what());
      }
    }
  }
  if (j.contains("n_max")) {
    s.n_max = get_int(j["n_max"], "n_max");
    if (s.n_max < 0) fail("n_max", "must be >= 0");
  }
  if (j.contains("relaxation")) s.noise.relaxation = get_bool(j["relaxation"], "relaxation");
  if (j.contains("mode")) {
    const std::string mode = get_string(j["mode"], "mode");
    if (mode == "gate") s.noise.mode = SimulationMode::GateLevel;
    else if (mode == "pulse") s.noise.mode = SimulationMode::PulseLevel;
    else fail("mode", "expected \"gate\" or \"pulse\", got \"" + mode + "\"");
  }
  if (j.contains("iteration_duration_s")) {
    s.noise.iteration_duration_s = get_number(j["iteration_duration_s"], "iteration_duration_s");
    if (!(s.noise.iteration_duration_s >= 0.0)) fail("iteration_duration_s", "must be >= 0");
  }
  if (j.contains("refocus_cycles")) {
    s.noise.pulse.refocus_cycles = get_int(j["refocus_cycles"], "refocus_cycles");
    if (s.noise.pulse.refocus_cycles < 1) fail("refocus_cycles", "must be >= 1");
  }
  if (j.contains("noisy_prep_readout")) s.noisy_prep_readout = get_bool(j["noisy_prep_readout"], "noisy_prep_readout");
  if (j.contains("output_dir")) cfg.out_dir = get_string(j["output_dir"], "output_dir");
  if (j.contains("deterministic")) cfg.deterministic = get_bool(j["deterministic"], "deterministic");
  if (s.sys.n_qubits != 3) fail("spin_system", "the experiment needs exactly 3 spins");
  finalize(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "': no such file or not readable");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

class OutputSet {
public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) std::filesystem::remove(p, ec);
  }

  void write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    written_.push_back(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    out.close();
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
  }

  void commit() { committed_ = true; }
  std::size_t count() const { return written_.size(); }

private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
  bool committed_ = false;
};

std::string decay_csv(const DecaySeries& s, const std::string& digest) {
  std::ostringstream os;
  os << "# config_sha256=" << digest << " model=" << to_string(s.model) << '\n';
  os << "n,F,c1,c12,c13,c123,sum_abs,purity\n";
  for (const auto& x : s.samples) {
    os << x.n << ',' << fmt(x.fidelity);
    for (double c : x.components) os << ',' << fmt(c);
    os << ',' << fmt(x.sum_abs) << ',' << fmt(x.purity) << '\n';
  }
  return os.str();
}

std::string spectrum_csv(const Spectrum& sp, const std::string& digest, NoiseModel model, Component c) {
  std::ostringstream os;
  os << "# config_sha256=" << digest << " model=" << to_string(model) << " component=" << component_name(c) << '\n';
  os << "bin_freq,magnitude\n";
  for (std::size_t k = 0; k < sp.frequency.size(); ++k) os << fmt(sp.frequency[k]) << ',' << fmt(sp.magnitude[k]) << '\n';
  return os.str();
}

std::string series_summary(const DecaySeries& s, double threshold) {
  const auto f = s.fidelities();
  std::ostringstream os;
  const std::string m = to_string(s.model);
  os << "recurrences_" << m << ": " << count_recurrences(f, threshold) << '\n';
  os << "saturation_" << m << ": " << fmt(saturation_estimate(f)) << '\n';
  os << "final_fidelity_" << m << ": " << fmt(f.back()) << '\n';
  return os.str();
}

}  // namespace

int run_command(const RunRequest& req, std::ostream& out, std::ostream& err) {
  try {
    ExperimentConfig cfg = req.config.empty() ? default_config() : load_config(req.config);
    const std::string model = req.model.empty() ? cfg.model : req.model;
    if (model != "both" && model != "incoherent" && model != "decoherent")
      throw ConfigError("--model: expected incoherent, decoherent or both, got '" + model + "'");
    const auto dir = req.out.empty() ? cfg.out_dir : req.out;

    const auto start = std::chrono::steady_clock::now();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());

    const bool spectra = cfg.setup.n_max + 1 >= 8;
    OutputSet files(dir);
    std::ostringstream summary;
    summary << "config_sha256: " << cfg.digest << '\n';

    auto emit = [&](const DecaySeries& s) {
      const std::string m = to_string(s.model);
      files.write("decay_" + m + ".csv", decay_csv(s, cfg.digest));
      if (!spectra) return;
      for (Component c : kComponents)
        files.write("spectrum_" + m + "_" + component_name(c) + ".csv", spectrum_csv(spectrum(s, c), cfg.digest, s.model, c));
    };

    if (model == "both") {
      const ModelComparison cmp = compare_models(cfg.setup);
      emit(cmp.incoherent);
      emit(cmp.decoherent);
      summary << cmp.summary();
    } else {
      const DecaySeries s = run_decay(parse_noise_model(model), cfg.setup);
      emit(s);
      summary << series_summary(s, 0.02);
    }
    if (!spectra) summary << "spectra: skipped (fewer than 8 samples)\n";
    if (!cfg.deterministic) {
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      summary << "elapsed_s: " << fmt(secs) << '\n';
    }
    files.write("summary.txt", summary.str());
    files.commit();
    out << "wrote " << files.count() << " files to " << dir.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

double cycle_residual(const CycleCheckRequest& req, const SpinSystem& sys) {
  if (req.cycle < 1) throw std::invalid_argument("cycle length must be >= 1");
  NoiseOptions options;
  options.mode = req.mode;
  options.relaxation = false;
  const Superoperator s = unitary_to_superop(perturbed_iteration_unitary(standard_plan(), sys, req.z, options));
  Superoperator p = Superoperator::Identity(s.rows(), s.cols());
  for (int i = 0; i < req.cycle; ++i) p = s * p;
  return (p - Superoperator::Identity(s.rows(), s.cols())).norm();
}

int cyclecheck_command(const CycleCheckRequest& req, std::ostream& out) {
  SpinSystem sys = default_spin_system();
  if (req.mode == SimulationMode::PulseLevel) {
    // Pulse-level cyclicity only holds where the refocusing is exact.
    sys.frequencies_hz.assign(sys.n_qubits, 0.0);
    sys.couplings_hz(0, 1) = sys.couplings_hz(1, 0) = 0.0;
    sys.couplings_hz(0, 2) = sys.couplings_hz(2, 0) = 0.0;
  }
  const double r = cycle_residual(req, sys);
  const bool pass = r < req.tolerance;
  out << "cycle " << req.cycle << " z " << fmt(req.z) << " residual " << fmt(r) << ' '
      << (pass ? "PASS (identity)" : "FAIL (not the identity)") << '\n';
  return pass ? 0 : 1;
}

int describe_command(const std::filesystem::path& config, std::ostream& out, std::ostream& err) {
  try {
    const ExperimentConfig cfg = config.empty() ? default_config() : load_config(config);
    const auto& s = cfg.setup;
    out << s.plan.describe();
    const auto steps = realize(std::span<const Gate>(s.plan.entangler));
    out << "entangler elementary steps: " << steps.size() << '\n';
    PulseParams params = s.noise.pulse;
    params.iteration_duration_s = s.noise.iteration_duration_s;
    const auto seq = compile_entangler_iteration(s.plan, s.sys, params);
    out << "pulse-level iteration: " << fmt(seq.duration()) << " s, " << seq.pulse_count(Channel::Hydrogen)
        << " hydrogen pulses, " << seq.pulse_count(Channel::Carbon) << " carbon pulses\n";
    out << "rf distribution mean: " << fmt(s.dist.mean()) << " over " << s.dist.size() << " points\n";
    out << "config_sha256: " << cfg.digest << '\n';
    out << cfg.resolved_json << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace incoh::app
