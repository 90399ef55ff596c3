#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "incoh/app.hpp"

using namespace incoh;
using namespace incoh::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("incoh_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::string& text) {
  try {
    (void)parse_config(text, "test.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("empty config gives the defaults") {
  const ExperimentConfig a = parse_config("", "empty");
  const ExperimentConfig b = parse_config("{}", "braces");
  const ExperimentConfig c = default_config();
  CHECK(a.digest == c.digest);
  CHECK(b.digest == c.digest);
  CHECK(a.setup.n_max == 30);
  CHECK(a.setup.dist.size() == 9);
  CHECK(a.model == "both");
}

TEST_CASE("comments are accepted and overrides apply") {
  const auto cfg = parse_config(R"({
    // fewer samples
    "n_max": 5,
    "rf_distribution": {"points": [1.0], "weights": [1.0]},
    "relaxation": false, /* inline */
    "mode": "pulse"
  })");
  CHECK(cfg.setup.n_max == 5);
  CHECK(cfg.setup.dist.size() == 1);
  CHECK_FALSE(cfg.setup.noise.relaxation);
  CHECK(cfg.setup.noise.mode == SimulationMode::PulseLevel);
  CHECK(cfg.digest != default_config().digest);
}

TEST_CASE("each config problem gets its own diagnostic") {
  CHECK(error_of(R"({"rf_distribution": {"points": [1, 1.1], "weights": [0.5, 0.4]}})").find("rf_distribution.weights") !=
        std::string::npos);
  CHECK(error_of(R"({"bogus": 1})").find("config.bogus: unknown key") != std::string::npos);
  CHECK(error_of(R"({"spin_system": {"t1": [1, 2, 3]}})").find("spin_system.t1") != std::string::npos);
  CHECK(error_of(R"({"spin_system": {"t2_s": [3, 1.5, -1]}})").find("spin_system.t2_s") != std::string::npos);
  CHECK(error_of(R"({"n_max": -2})").find("config.n_max") != std::string::npos);
  CHECK(error_of(R"({"n_max": 2.5})").find("config.n_max") != std::string::npos);
  CHECK(error_of(R"({"mode": "analog"})").find("config.mode") != std::string::npos);
  CHECK(error_of(R"({"model": "markov"})").find("config.model") != std::string::npos);
  CHECK(error_of(R"({"n_max": )").find("cannot parse 'test.json'") != std::string::npos);
  CHECK(error_of(R"([1, 2])").find("must be an object") != std::string::npos);
  try {
    (void)load_config("/nonexistent/dir/cfg.json");
    FAIL("expected a missing-file error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("cannot open '/nonexistent/dir/cfg.json'") != std::string::npos);
  }
}

TEST_CASE("sha256 digest") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("run --model both writes eleven files") {
  const fs::path out = scratch("both");
  std::ostringstream o, e;
  RunRequest req;
  req.model = "both";
  req.out = out;
  REQUIRE(run_command(req, o, e) == 0);
  int decay = 0, spectra = 0, summary = 0;
  for (const auto& f : fs::directory_iterator(out)) {
    const std::string name = f.path().filename().string();
    decay += name.rfind("decay_", 0) == 0;
    spectra += name.rfind("spectrum_", 0) == 0;
    summary += name == "summary.txt";
  }
  CHECK(decay == 2);
  CHECK(spectra == 8);
  CHECK(summary == 1);

  const std::string csv = slurp(out / "decay_decoherent.csv");
  CHECK(csv.rfind("# config_sha256=" + default_config().digest, 0) == 0);
  CHECK(csv.find("\nn,F,c1,c12,c13,c123,sum_abs,purity\n") != std::string::npos);
  CHECK(slurp(out / "spectrum_incoherent_c123.csv").find("\nbin_freq,magnitude\n") != std::string::npos);
  CHECK(slurp(out / "spectrum_incoherent_c123.csv").find("\n0.125,") != std::string::npos);

  // Deterministic output: a second run is byte-identical.
  const fs::path again = scratch("both_again");
  req.out = again;
  REQUIRE(run_command(req, o, e) == 0);
  for (const auto& f : fs::directory_iterator(out)) CHECK(slurp(f.path()) == slurp(again / f.path().filename()));
}

TEST_CASE("noiseless config yields unit fidelity") {
  const fs::path dir = scratch("noiseless");
  {
    std::ofstream cfg(dir / "noiseless.json");
    cfg << R"({"rf_distribution": {"points": [1.0], "weights": [1.0]}, "relaxation": false})";
  }
  RunRequest req{"incoherent", dir / "noiseless.json", dir / "out"};
  std::ostringstream o, e;
  REQUIRE(run_command(req, o, e) == 0);
  std::istringstream csv(slurp(dir / "out" / "decay_incoherent.csv"));
  std::string line;
  std::getline(csv, line);
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    const double f = std::stod(line.substr(line.find(',') + 1));
    CHECK(std::abs(f - 1.0) < 1e-10);
    ++rows;
  }
  CHECK(rows == 31);
}

TEST_CASE("summary reports decoherent saturation near 1/8") {
  const fs::path out = scratch("summary");
  std::ostringstream o, e;
  REQUIRE(run_command(RunRequest{"both", {}, out}, o, e) == 0);
  const std::string s = slurp(out / "summary.txt");
  const auto pos = s.find("saturation_decoherent: ");
  REQUIRE(pos != std::string::npos);
  const double sat = std::stod(s.substr(pos + 23));
  CHECK(std::abs(sat - 0.125) < 0.05);
  CHECK(s.find("elapsed") == std::string::npos);
}

TEST_CASE("failed runs leave no partial output") {
  const fs::path out = scratch("partial");
  fs::create_directories(out / "summary.txt");  // blocks the last write
  std::ostringstream o, e;
  CHECK(run_command(RunRequest{"both", {}, out}, o, e) == 1);
  CHECK(e.str().find("summary.txt") != std::string::npos);
  int files = 0;
  for (const auto& f : fs::directory_iterator(out)) files += f.is_regular_file();
  CHECK(files == 0);
}

TEST_CASE("bad config makes run fail with a diagnostic") {
  std::ostringstream o, e;
  CHECK(run_command(RunRequest{"both", "/nonexistent.json", scratch("bad")}, o, e) == 1);
  CHECK(e.str().find("cannot open") != std::string::npos);
}

TEST_CASE("cyclecheck") {
  std::ostringstream o;
  CHECK(cyclecheck_command(CycleCheckRequest{}, o) == 0);
  CHECK(o.str().find("PASS") != std::string::npos);

  CycleCheckRequest four;
  four.cycle = 4;
  CHECK(cyclecheck_command(four, o) == 1);

  CycleCheckRequest perturbed;
  perturbed.z = 1.05;
  CHECK(cycle_residual(perturbed, default_spin_system()) > 1e-3);
  CHECK(cyclecheck_command(perturbed, o) == 1);
}

TEST_CASE("describe prints the plan") {
  std::ostringstream o, e;
  CHECK(describe_command({}, o, e) == 0);
  CHECK(o.str().find("entangler: H(2) CNOT(2->3)") != std::string::npos);
  CHECK(o.str().find("pulse-level iteration: 0.0085 s") != std::string::npos);
}
