// Gate- and pulse-level descriptions of the GHZ / iterated-entangler /
// readout circuit.
#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "incoh/spincore.hpp"

namespace incoh {

enum class GateKind { Hadamard, Cnot, RotX, RotY, RotZ, Delay };

/// Circuit gate. Qubit indices are 1-based; `qubit` is the control for CNOT.
struct Gate {
  GateKind kind = GateKind::Hadamard;
  int qubit = 0;
  int target = 0;
  double angle = 0.0;     // rotations, radians
  double duration = 0.0;  // delays, seconds

  static Gate hadamard(int q) { return {GateKind::Hadamard, q, 0, 0.0, 0.0}; }
  static Gate cnot(int control, int target) { return {GateKind::Cnot, control, target, 0.0, 0.0}; }
  static Gate rot_x(int q, double a) { return {GateKind::RotX, q, 0, a, 0.0}; }
  static Gate rot_y(int q, double a) { return {GateKind::RotY, q, 0, a, 0.0}; }
  static Gate rot_z(int q, double a) { return {GateKind::RotZ, q, 0, a, 0.0}; }
  static Gate delay(double t) { return {GateKind::Delay, 0, 0, 0.0, t}; }

  std::string describe() const;
  void validate(std::size_t n_qubits) const;
};

using GateList = std::vector<Gate>;

/// The three circuit stages. The entangler is one iteration of the map;
/// after `cycle_length` iterations it is the identity.
struct CircuitPlan {
  GateList prep;
  GateList entangler;
  GateList readout_even;
  GateList readout_odd;
  int cycle_length = 8;

  std::string describe() const;
};

/// H(1), CNOT(1->2), CNOT(2->3) / [H(2), CNOT(2->3)] / inverse of the prep.
CircuitPlan standard_plan();

GateList ghz_prep();

/// Prep, 4n entangler iterations, then the readout for the parity of n.
GateList full_circuit(const CircuitPlan& plan, int n);

/// Exact unitary of one gate on the full register.
Operator gate_unitary(const Gate& g, const SpinSystem& sys);

/// Time-ordered product of gate unitaries.
Operator circuit_unitary(std::span<const Gate> gates, const SpinSystem& sys);

/// CNOT(2->3) H(2) on a 3-qubit register.
Operator entangling_map(const SpinSystem& sys);

// ---------------------------------------------------------------------------
// Rotation decomposition. Every supported gate is realized as a fixed list of
// elementary steps; the rf scale factor multiplies pulse angles on carbon
// qubits.

/// Hard rotation about X or Y on one qubit.
struct PulseStep {
  int qubit;
  Pauli axis;
  double angle;
};

/// exp(-i angle/2 Z_a Z_b).
struct CouplingStep {
  int a;
  int b;
  double angle;
};

/// Evolution under the internal Hamiltonian.
struct FreeStep {
  double duration;
};

using Step = std::variant<PulseStep, CouplingStep, FreeStep>;

/// Hadamard: Ry(pi/4), Rx(pi), Ry(-pi/4). Rz(theta): Rx(-pi/2), Ry(theta),
/// Rx(pi/2). CNOT(c->t): H(t), ZZ(pi/2), Rz(c, -pi/2), Rz(t, -pi/2), H(t).
std::vector<Step> realize(const Gate& g);
std::vector<Step> realize(std::span<const Gate> gates);

/// Unitary of a step list with carbon pulse angles multiplied by
/// `carbon_scale`. At scale 1 this equals circuit_unitary up to global phase.
Operator realized_unitary(std::span<const Step> steps, const SpinSystem& sys, double carbon_scale);

// ---------------------------------------------------------------------------
// Pulse level

/// Instantaneous hard pulse about cos(phase) X + sin(phase) Y.
struct Pulse {
  Channel channel;
  std::vector<int> targets;
  double angle;
  double phase;
};

struct DelaySegment {
  double duration;
};

using Segment = std::variant<Pulse, DelaySegment>;

struct PulseSequence {
  std::vector<Segment> segments;

  double duration() const;
  std::size_t pulse_count(Channel channel) const;
  void append(const PulseSequence& other);
};

struct PulseParams {
  /// If positive, each compiled entangler iteration is padded with a
  /// refocused idle block up to this length.
  double iteration_duration_s = 0.0;
  /// Each coupling or idle block is split into this many refocusing cycles.
  /// More cycles suppress the homonuclear flip-flop term further.
  int refocus_cycles = 1;
};

/// Coupling delay that realizes ZZ(pi/2) between the CNOT's qubits.
double cnot_coupling_delay(const SpinSystem& sys, int control, int target);

/// Compiles gates to hard pulses and delays. ZZ coupling is obtained from a
/// four-segment refocused delay of total length 1/(2 J_ct).
PulseSequence compile_to_pulses(std::span<const Gate> gates, const SpinSystem& sys,
                                const PulseParams& params = {});

/// One entangler iteration, padded to `params.iteration_duration_s`.
PulseSequence compile_entangler_iteration(const CircuitPlan& plan, const SpinSystem& sys,
                                          const PulseParams& params);

/// Delays evolve under rotating_frame_hamiltonian(sys).
Operator pulse_sequence_unitary(const PulseSequence& seq, const SpinSystem& sys, double carbon_scale);

/// Superoperator-level distance ||S(a) - S(b)||_F, insensitive to global phase.
double superop_distance(const Operator& a, const Operator& b);

}  // namespace incoh
