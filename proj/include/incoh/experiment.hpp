// Fidelity-decay runs over the cyclic entangler and their spectra.
#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "incoh/noise.hpp"

namespace incoh {

enum class NoiseModel { Incoherent, Decoherent };

std::string to_string(NoiseModel model);
/// "incoherent" or "decoherent"; anything else throws std::invalid_argument.
NoiseModel parse_noise_model(std::string_view tag);

struct ExperimentSetup {
  SpinSystem sys = default_spin_system();
  CircuitPlan plan = standard_plan();
  RfDistribution dist = default_rf_distribution();
  NoiseOptions noise;
  int n_max = 30;
  /// Entangler iterations per sample; the ensemble average in the
  /// decoherent model is taken once per sample.
  int iterations_per_sample = 4;
  /// Scale carbon pulses in prep and readout as well.
  bool noisy_prep_readout = false;

  void validate() const;
};

/// Ideal run: single point at z = 1, relaxation off.
ExperimentSetup noiseless_setup();

enum class Component { C1, C12, C13, C123 };
inline constexpr std::array<Component, 4> kComponents{Component::C1, Component::C12, Component::C13,
                                                     Component::C123};

/// "c1", "c12", "c13", "c123".
std::string component_name(Component c);
/// ZII, ZZI, ZIZ, ZZZ.
PauliLabel component_label(Component c);

/// trace(P_i rho) / 8 for the four components, in kComponents order.
std::array<double, 4> component_coefficients(const StateVecL& rho);

struct DecaySample {
  int n = 0;
  double fidelity = 0.0;
  std::array<double, 4> components{};
  double sum_abs = 0.0;
  /// Purity of the ensemble-averaged state.
  double purity = 0.0;
  /// Smallest purity over individual members (incoherent model only;
  /// equals `purity` for the decoherent model).
  double min_member_purity = 0.0;
};

struct DecaySeries {
  NoiseModel model = NoiseModel::Incoherent;
  std::vector<DecaySample> samples;

  std::vector<double> fidelities() const;
  std::vector<double> component(Component c) const;
};

/// Target index of the ideal output: |000> for even n, |001> for odd n.
std::size_t target_index(int n);

DecaySeries run_decay(NoiseModel model, const ExperimentSetup& setup);

struct Spectrum {
  std::vector<double> frequency;  // periods per entangling operation
  std::vector<double> magnitude;
};

/// |DFT| of the series over bins 0..N/2. One sample spans `ops_per_sample`
/// entangling operations, so the last bin sits at 1/(2 ops_per_sample).
/// Odd-length input drops its last sample so that bin exists.
Spectrum magnitude_spectrum(std::span<const double> series, int ops_per_sample = 4);

/// Spectrum of |c_i(n)|.
Spectrum spectrum(const DecaySeries& series, Component c);

/// Number of consecutive-sample increases of at least `threshold`.
int count_recurrences(std::span<const double> values, double threshold = 0.02);

/// Largest consecutive-sample increase (negative if strictly decreasing).
double max_rise(std::span<const double> values);

/// Mean of the last `tail` values.
double saturation_estimate(std::span<const double> values, std::size_t tail = 5);

struct ModelComparison {
  DecaySeries incoherent;
  DecaySeries decoherent;
  std::array<Spectrum, 4> incoherent_spectra;
  std::array<Spectrum, 4> decoherent_spectra;
  int recurrences_incoherent = 0;
  int recurrences_decoherent = 0;
  double saturation_incoherent = 0.0;
  double saturation_decoherent = 0.0;
  /// Incoherent over decoherent Nyquist-bin magnitude, per component.
  std::array<double, 4> nyquist_ratio{};
  /// |F_1(incoherent) - F_1(decoherent)|.
  double n1_difference = 0.0;
  bool identical = false;

  std::string summary() const;
};

ModelComparison compare_models(const ExperimentSetup& setup, double threshold = 0.02);

}  // namespace incoh
