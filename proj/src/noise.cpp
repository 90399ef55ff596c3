#include "incoh/noise.hpp"

#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>
#include <string>

namespace incoh {

void RfDistribution::validate() const {
  if (points.empty()) throw std::invalid_argument("rf_distribution: no points");
  if (points.size() != weights.size())
    throw std::invalid_argument("rf_distribution: " + std::to_string(points.size()) + " points but " +
                                std::to_string(weights.size()) + " weights");
  double sum = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!(points[k] > 0.0) || !std::isfinite(points[k]))
      throw std::invalid_argument("rf_distribution.points[" + std::to_string(k) + "] must be positive");
    if (!(weights[k] >= 0.0) || !std::isfinite(weights[k]))
      throw std::invalid_argument("rf_distribution.weights[" + std::to_string(k) + "] must be >= 0");
    sum += weights[k];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("rf_distribution.weights: sum is " + std::to_string(sum) + ", expected 1");
}

double RfDistribution::mean() const {
  return std::inner_product(points.begin(), points.end(), weights.begin(), 0.0);
}

RfDistribution default_rf_distribution() {
  return {{0.910, 0.930, 0.945, 0.965, 0.985, 1.000, 1.020, 1.035, 1.055},
          {0.018, 0.043, 0.095, 0.194, 0.211, 0.143, 0.141, 0.101, 0.054}};
}

RfDistribution single_point(double z) { return {{z}, {1.0}}; }

// ---------------------------------------------------------------------------

Operator perturbed_gates_unitary(std::span<const Gate> gates, const SpinSystem& sys, double z,
                                 const NoiseOptions& options) {
  if (!(z > 0.0)) throw std::invalid_argument("rf scale factor z must be positive");
  if (options.mode == SimulationMode::GateLevel) {
    const auto steps = realize(gates);
    return realized_unitary(steps, sys, z);
  }
  PulseParams params = options.pulse;
  params.iteration_duration_s = 0.0;
  return pulse_sequence_unitary(compile_to_pulses(gates, sys, params), sys, z);
}

Operator perturbed_iteration_unitary(const CircuitPlan& plan, const SpinSystem& sys, double z,
                                     const NoiseOptions& options) {
  if (!(z > 0.0)) throw std::invalid_argument("rf scale factor z must be positive");
  if (options.mode == SimulationMode::GateLevel) {
    const auto steps = realize(plan.entangler);
    return realized_unitary(steps, sys, z);
  }
  PulseParams params = options.pulse;
  params.iteration_duration_s = options.iteration_duration_s;
  return pulse_sequence_unitary(compile_entangler_iteration(plan, sys, params), sys, z);
}

namespace {

Superoperator iteration_relaxation(const SpinSystem& sys, const NoiseOptions& options) {
  const RelaxationRates rates = options.rates ? *options.rates : RelaxationRates::from_spin_system(sys);
  return relaxation_superop(rates, options.iteration_duration_s);
}

Superoperator matrix_power(const Superoperator& m, int k) {
  Superoperator out = Superoperator::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) out = m * out;
  return out;
}

}  // namespace

Superoperator perturbed_iteration_superop(const CircuitPlan& plan, const SpinSystem& sys, double z,
                                          const NoiseOptions& options) {
  Superoperator s = unitary_to_superop(perturbed_iteration_unitary(plan, sys, z, options));
  if (options.relaxation) s = iteration_relaxation(sys, options) * s;
  return s;
}

Superoperator Ensemble::average() const {
  if (members.empty()) throw std::invalid_argument("ensemble is empty");
  return mix_channels(members, weights);
}

Ensemble build_ensemble(const CircuitPlan& plan, const SpinSystem& sys, const RfDistribution& dist,
                        const NoiseOptions& options, int iterations_per_step) {
  dist.validate();
  sys.validate();
  if (iterations_per_step < 1) throw std::invalid_argument("iterations_per_step must be >= 1");
  const Superoperator relax = options.relaxation ? iteration_relaxation(sys, options) : Superoperator{};

  std::vector<std::future<Superoperator>> jobs;
  jobs.reserve(dist.size());
  for (double z : dist.points) {
    jobs.push_back(std::async(std::launch::async, [&, z] {
      Superoperator s = unitary_to_superop(perturbed_iteration_unitary(plan, sys, z, options));
      if (options.relaxation) s = relax * s;
      return matrix_power(s, iterations_per_step);
    }));
  }
  Ensemble ens;
  ens.weights = dist.weights;
  ens.iterations_per_step = iterations_per_step;
  for (auto& job : jobs) ens.members.push_back(job.get());
  return ens;
}

std::vector<StateVecL> member_states(const StateVecL& rho0, const Ensemble& ens, int steps) {
  if (steps < 0) throw std::invalid_argument("step count must be non-negative");
  std::vector<StateVecL> out;
  out.reserve(ens.members.size());
  for (const Superoperator& b : ens.members) {
    StateVecL v = rho0;
    for (int i = 0; i < steps; ++i) v = b * v;
    out.push_back(std::move(v));
  }
  return out;
}

StateVecL incoherent_evolve(const StateVecL& rho0, const Ensemble& ens, int steps) {
  const auto states = member_states(rho0, ens, steps);
  StateVecL acc = StateVecL::Zero(rho0.size());
  for (std::size_t k = 0; k < states.size(); ++k) acc += ens.weights[k] * states[k];
  return acc;
}

StateVecL decoherent_evolve(const StateVecL& rho0, const Ensemble& ens, int steps) {
  if (steps < 0) throw std::invalid_argument("step count must be non-negative");
  const Superoperator avg = ens.average();
  StateVecL v = rho0;
  for (int i = 0; i < steps; ++i) v = avg * v;
  return v;
}

StateVecL incoherent_evolve(const StateVecL& rho0, const CircuitPlan& plan, const SpinSystem& sys,
                            const RfDistribution& dist, const NoiseOptions& options, int n) {
  return incoherent_evolve(rho0, build_ensemble(plan, sys, dist, options, 1), n);
}

StateVecL decoherent_evolve(const StateVecL& rho0, const CircuitPlan& plan, const SpinSystem& sys,
                            const RfDistribution& dist, const NoiseOptions& options, int n) {
  return decoherent_evolve(rho0, build_ensemble(plan, sys, dist, options, 1), n);
}

}  // namespace incoh
