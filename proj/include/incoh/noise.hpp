// RF-inhomogeneity ensembles and the two propagation regimes.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "incoh/circuit.hpp"
#include "incoh/liouville.hpp"

namespace incoh {

/// Discrete distribution of carbon rf scale factors.
struct RfDistribution {
  std::vector<double> points;
  std::vector<double> weights;

  /// Throws std::invalid_argument naming the distribution.
  void validate() const;
  double mean() const;
  std::size_t size() const { return points.size(); }
};

/// Nine-point default, read off a plotted distribution and tuned so the
/// qualitative decay features show up. Not measured data.
RfDistribution default_rf_distribution();

RfDistribution single_point(double z);

enum class SimulationMode { GateLevel, PulseLevel };

struct NoiseOptions {
  SimulationMode mode = SimulationMode::GateLevel;
  bool relaxation = true;
  /// Relaxation time charged to each entangler iteration (34 ms / 4).
  double iteration_duration_s = 0.0085;
  /// Overrides the rates derived from the spin system's T1/T2.
  std::optional<RelaxationRates> rates;
  PulseParams pulse;
};

/// Unitary of one entangler iteration with carbon pulse angles scaled by z.
Operator perturbed_iteration_unitary(const CircuitPlan& plan, const SpinSystem& sys, double z,
                                     const NoiseOptions& options);

/// Relaxation for one iteration composed after the perturbed unitary.
Superoperator perturbed_iteration_superop(const CircuitPlan& plan, const SpinSystem& sys, double z,
                                          const NoiseOptions& options);

/// Unitary of an arbitrary gate list under scale z (used for prep/readout).
Operator perturbed_gates_unitary(std::span<const Gate> gates, const SpinSystem& sys, double z,
                                 const NoiseOptions& options);

/// One superoperator per distribution point, each covering
/// `iterations_per_step` consecutive iterations at fixed z.
struct Ensemble {
  std::vector<Superoperator> members;
  std::vector<double> weights;
  int iterations_per_step = 1;

  /// Σ p_k members[k], summed in index order.
  Superoperator average() const;
};

Ensemble build_ensemble(const CircuitPlan& plan, const SpinSystem& sys, const RfDistribution& dist,
                        const NoiseOptions& options, int iterations_per_step = 1);

/// Per-member states after `steps` applications of each member.
std::vector<StateVecL> member_states(const StateVecL& rho0, const Ensemble& ens, int steps);

/// Σ_k p_k B_k^steps rho0.
StateVecL incoherent_evolve(const StateVecL& rho0, const Ensemble& ens, int steps);

/// (Σ_k p_k B_k)^steps rho0.
StateVecL decoherent_evolve(const StateVecL& rho0, const Ensemble& ens, int steps);

/// Per-iteration forms: the ensemble average is taken over single iterations.
StateVecL incoherent_evolve(const StateVecL& rho0, const CircuitPlan& plan, const SpinSystem& sys,
                            const RfDistribution& dist, const NoiseOptions& options, int n);
StateVecL decoherent_evolve(const StateVecL& rho0, const CircuitPlan& plan, const SpinSystem& sys,
                            const RfDistribution& dist, const NoiseOptions& options, int n);

}  // namespace incoh
