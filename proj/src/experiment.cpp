#include "incoh/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace incoh {

std::string to_string(NoiseModel model) {
  return model == NoiseModel::Incoherent ? "incoherent" : "decoherent";
}

NoiseModel parse_noise_model(std::string_view tag) {
  if (tag == "incoherent") return NoiseModel::Incoherent;
  if (tag == "decoherent") return NoiseModel::Decoherent;
  throw std::invalid_argument("unknown noise model '" + std::string(tag) +
                              "' (expected incoherent or decoherent)");
}

void ExperimentSetup::validate() const {
  sys.validate();
  if (sys.n_qubits != 3) throw std::invalid_argument("spin_system: the experiment needs 3 qubits");
  dist.validate();
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  if (iterations_per_sample < 1) throw std::invalid_argument("iterations_per_sample must be >= 1");
  if (!(noise.iteration_duration_s >= 0.0) || !std::isfinite(noise.iteration_duration_s))
    throw std::invalid_argument("iteration_duration_s must be finite and >= 0");
}

ExperimentSetup noiseless_setup() {
  ExperimentSetup s;
  s.dist = single_point(1.0);
  s.noise.relaxation = false;
  return s;
}

std::string component_name(Component c) {
  switch (c) {
    case Component::C1: return "c1";
    case Component::C12: return "c12";
    case Component::C13: return "c13";
    case Component::C123: return "c123";
  }
  throw std::logic_error("unreachable component");
}

PauliLabel component_label(Component c) {
  switch (c) {
    case Component::C1: return PauliLabel::parse("ZII");
    case Component::C12: return PauliLabel::parse("ZZI");
    case Component::C13: return PauliLabel::parse("ZIZ");
    case Component::C123: return PauliLabel::parse("ZZZ");
  }
  throw std::logic_error("unreachable component");
}

std::array<double, 4> component_coefficients(const StateVecL& rho) {
  if (rho.size() != 64) throw std::invalid_argument("component_coefficients: expected a 3-qubit state (length 64)");
  const Operator m = devectorize(rho);
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < kComponents.size(); ++i) {
    // Z products are diagonal, so the trace only touches the diagonal of rho.
    const Operator p = pauli_product(component_label(kComponents[i]));
    double acc = 0.0;
    for (Eigen::Index d = 0; d < 8; ++d) acc += (p(d, d) * m(d, d)).real();
    out[i] = acc / 8.0;
  }
  return out;
}

std::vector<double> DecaySeries::fidelities() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.fidelity);
  return out;
}

std::vector<double> DecaySeries::component(Component c) const {
  const auto idx = static_cast<std::size_t>(c);
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.components[idx]);
  return out;
}

std::size_t target_index(int n) { return n % 2 == 0 ? 0 : 1; }

namespace {

struct StageMaps {
  std::vector<Superoperator> prep;          // per member, or a single entry
  std::vector<Superoperator> readout_even;
  std::vector<Superoperator> readout_odd;
};

StageMaps stage_maps(const ExperimentSetup& setup) {
  StageMaps maps;
  auto build = [&](const GateList& gates) {
    std::vector<Superoperator> out;
    if (setup.noisy_prep_readout) {
      for (double z : setup.dist.points)
        out.push_back(unitary_to_superop(perturbed_gates_unitary(gates, setup.sys, z, setup.noise)));
    } else {
      out.push_back(unitary_to_superop(circuit_unitary(gates, setup.sys)));
    }
    return out;
  };
  maps.prep = build(setup.plan.prep);
  maps.readout_even = build(setup.plan.readout_even);
  maps.readout_odd = build(setup.plan.readout_odd);
  return maps;
}

const Superoperator& pick(const std::vector<Superoperator>& v, std::size_t k) { return v.size() == 1 ? v[0] : v[k]; }

Superoperator averaged(const std::vector<Superoperator>& v, const std::vector<double>& w) {
  return v.size() == 1 ? v[0] : mix_channels(v, w);
}

DecaySample make_sample(int n, const StateVecL& out, double min_member_purity) {
  DecaySample s;
  s.n = n;
  s.fidelity = fidelity(basis_state(8, target_index(n)), out);
  s.components = component_coefficients(out);
  s.sum_abs = 0.0;
  for (double c : s.components) s.sum_abs += std::abs(c);
  s.purity = purity(out);
  s.min_member_purity = min_member_purity;
  return s;
}

}  // namespace

DecaySeries run_decay(NoiseModel model, const ExperimentSetup& setup) {
  setup.validate();
  const Ensemble ens = build_ensemble(setup.plan, setup.sys, setup.dist, setup.noise, setup.iterations_per_sample);
  const StageMaps maps = stage_maps(setup);
  const StateVecL rho0 = basis_state(8, 0);
  const std::size_t members = ens.members.size();

  DecaySeries series;
  series.model = model;
  series.samples.reserve(static_cast<std::size_t>(setup.n_max) + 1);

  if (model == NoiseModel::Incoherent) {
    std::vector<StateVecL> states;
    for (std::size_t k = 0; k < members; ++k) states.push_back(pick(maps.prep, k) * rho0);
    for (int n = 0; n <= setup.n_max; ++n) {
      const auto& readout = n % 2 == 0 ? maps.readout_even : maps.readout_odd;
      StateVecL acc = StateVecL::Zero(64);
      double min_purity = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < members; ++k) {
        const StateVecL out = pick(readout, k) * states[k];
        min_purity = std::min(min_purity, purity(out));
        acc += ens.weights[k] * out;
      }
      series.samples.push_back(make_sample(n, acc, min_purity));
      for (std::size_t k = 0; k < members; ++k) states[k] = ens.members[k] * states[k];
    }
  } else {
    const Superoperator avg = ens.average();
    const Superoperator prep = averaged(maps.prep, ens.weights);
    const Superoperator ro_even = averaged(maps.readout_even, ens.weights);
    const Superoperator ro_odd = averaged(maps.readout_odd, ens.weights);
    StateVecL v = prep * rho0;
    for (int n = 0; n <= setup.n_max; ++n) {
      const StateVecL out = (n % 2 == 0 ? ro_even : ro_odd) * v;
      const double p = purity(out);
      series.samples.push_back(make_sample(n, out, p));
      v = avg * v;
    }
  }
  return series;
}

Spectrum magnitude_spectrum(std::span<const double> series, int ops_per_sample) {
  if (series.size() < 8) throw std::invalid_argument("spectrum: series needs at least 8 samples, got " +
                                                     std::to_string(series.size()));
  if (ops_per_sample < 1) throw std::invalid_argument("spectrum: ops_per_sample must be >= 1");
  const std::size_t n = series.size() - series.size() % 2;
  std::vector<double> input(series.begin(), series.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<std::complex<double>> freq;
  Eigen::FFT<double> fft;
  fft.fwd(freq, input);

  Spectrum s;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    s.frequency.push_back(static_cast<double>(k) / (static_cast<double>(ops_per_sample) * static_cast<double>(n)));
    s.magnitude.push_back(std::abs(freq[k]));
  }
  return s;
}

Spectrum spectrum(const DecaySeries& series, Component c) {
  auto values = series.component(c);
  for (double& v : values) v = std::abs(v);
  return magnitude_spectrum(values);
}

int count_recurrences(std::span<const double> values, double threshold) {
  int count = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] - values[i - 1] >= threshold) ++count;
  return count;
}

double max_rise(std::span<const double> values) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < values.size(); ++i) best = std::max(best, values[i] - values[i - 1]);
  return best;
}

double saturation_estimate(std::span<const double> values, std::size_t tail) {
  if (values.empty() || tail == 0) throw std::invalid_argument("saturation_estimate: empty input");
  tail = std::min(tail, values.size());
  double sum = 0.0;
  for (std::size_t i = values.size() - tail; i < values.size(); ++i) sum += values[i];
  return sum / static_cast<double>(tail);
}

ModelComparison compare_models(const ExperimentSetup& setup, double threshold) {
  ModelComparison r;
  r.incoherent = run_decay(NoiseModel::Incoherent, setup);
  r.decoherent = run_decay(NoiseModel::Decoherent, setup);
  const auto fi = r.incoherent.fidelities();
  const auto fd = r.decoherent.fidelities();
  r.recurrences_incoherent = count_recurrences(fi, threshold);
  r.recurrences_decoherent = count_recurrences(fd, threshold);
  r.saturation_incoherent = saturation_estimate(fi);
  r.saturation_decoherent = saturation_estimate(fd);
  r.n1_difference = fi.size() > 1 ? std::abs(fi[1] - fd[1]) : 0.0;

  const bool long_enough = fi.size() >= 8;
  for (std::size_t i = 0; i < kComponents.size(); ++i) {
    if (!long_enough) break;
    r.incoherent_spectra[i] = spectrum(r.incoherent, kComponents[i]);
    r.decoherent_spectra[i] = spectrum(r.decoherent, kComponents[i]);
    const double a = r.incoherent_spectra[i].magnitude.back();
    const double b = r.decoherent_spectra[i].magnitude.back();
    r.nyquist_ratio[i] = b > 0.0 ? a / b : (a > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
  }

  r.identical = true;
  for (std::size_t n = 0; n < fi.size() && r.identical; ++n) {
    const auto& a = r.incoherent.samples[n];
    const auto& b = r.decoherent.samples[n];
    if (std::abs(a.fidelity - b.fidelity) > 1e-12) r.identical = false;
    for (std::size_t i = 0; i < 4; ++i)
      if (std::abs(a.components[i] - b.components[i]) > 1e-12) r.identical = false;
  }
  return r;
}

std::string ModelComparison::summary() const {
  std::ostringstream os;
  char buf[128];
  auto line = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%s: %.15g\n", key, v);
    os << buf;
  };
  os << "models_identical: " << (identical ? "yes" : "no") << '\n';
  os << "recurrences_incoherent: " << recurrences_incoherent << '\n';
  os << "recurrences_decoherent: " << recurrences_decoherent << '\n';
  line("saturation_incoherent", saturation_incoherent);
  line("saturation_decoherent", saturation_decoherent);
  line("n1_fidelity_difference", n1_difference);
  for (std::size_t i = 0; i < kComponents.size(); ++i) {
    const std::string key = "nyquist_ratio_" + component_name(kComponents[i]);
    line(key.c_str(), nyquist_ratio[i]);
  }
  return os.str();
}

}  // namespace incoh
