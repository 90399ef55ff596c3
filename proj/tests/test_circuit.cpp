#include <doctest.h>

#include "incoh/circuit.hpp"
#include "incoh/liouville.hpp"
#include "oracle.hpp"

using namespace incoh;

namespace {

SpinSystem refocus_friendly() {
  SpinSystem s = default_spin_system();
  s.frequencies_hz = {0.0, 0.0, 0.0};
  s.couplings_hz(0, 1) = s.couplings_hz(1, 0) = 0.0;
  s.couplings_hz(0, 2) = s.couplings_hz(2, 0) = 0.0;
  return s;
}

}  // namespace

TEST_CASE("gate unitaries match explicit constructions") {
  const SpinSystem s = default_spin_system();
  for (int q = 1; q <= 3; ++q) CHECK((gate_unitary(Gate::hadamard(q), s) - oracle::hadamard(q)).norm() < 1e-14);
  CHECK((gate_unitary(Gate::cnot(1, 2), s) - oracle::cnot(1, 2)).norm() < 1e-14);
  CHECK((gate_unitary(Gate::cnot(3, 1), s) - oracle::cnot(3, 1)).norm() < 1e-14);
  CHECK((gate_unitary(Gate::rot_z(2, 0.3), s) - oracle::on(2, oracle::rot(oracle::pauli('Z'), 0.3), 3)).norm() < 1e-14);
  CHECK((gate_unitary(Gate::delay(1e-3), s) - propagator(internal_hamiltonian(s), 1e-3)).norm() < 1e-14);
}

TEST_CASE("gate validation") {
  const SpinSystem s = default_spin_system();
  CHECK_THROWS_AS(gate_unitary(Gate::cnot(2, 2), s), std::invalid_argument);
  CHECK_THROWS_AS(gate_unitary(Gate::hadamard(4), s), std::invalid_argument);
  CHECK_THROWS_AS(gate_unitary(Gate::delay(-1.0), s), std::invalid_argument);
  CHECK_THROWS_AS(full_circuit(standard_plan(), -1), std::invalid_argument);
}

TEST_CASE("entangler has period 8 but not 4") {
  const SpinSystem s = default_spin_system();
  const Superoperator g = unitary_to_superop(entangling_map(s));
  Superoperator p = Superoperator::Identity(64, 64);
  for (int i = 1; i <= 8; ++i) {
    p = g * p;
    const double r = (p - Superoperator::Identity(64, 64)).norm();
    if (i == 8) CHECK(r < 1e-9);
    else CHECK(r > 0.1);
  }
  CHECK((entangling_map(s) - oracle::ideal_entangler()).norm() < 1e-14);
}

TEST_CASE("prep makes the GHZ state and full circuits return basis states") {
  const SpinSystem s = default_spin_system();
  const Operator prep = circuit_unitary(ghz_prep(), s);
  CHECK(std::abs(prep(0, 0) - Complex(1 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(prep(7, 0) - Complex(1 / std::sqrt(2.0))) < 1e-15);
  for (int n = 0; n <= 5; ++n) {
    const auto gates = full_circuit(standard_plan(), n);
    CHECK(gates.size() == 6 + 8 * static_cast<std::size_t>(n));
    const Operator u = circuit_unitary(gates, s);
    CHECK(std::norm(u(n % 2 == 0 ? 0 : 1, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("realized decompositions equal the gates at nominal scale") {
  const SpinSystem s = default_spin_system();
  const GateList gates{Gate::hadamard(1), Gate::hadamard(3), Gate::cnot(1, 2), Gate::cnot(2, 3),
                       Gate::cnot(3, 2), Gate::rot_z(2, 0.9), Gate::rot_x(3, -0.4), Gate::rot_y(1, 1.3)};
  for (const Gate& g : gates) {
    const GateList one{g};
    const auto steps = realize(one);
    CHECK_MESSAGE(superop_distance(realized_unitary(steps, s, 1.0), circuit_unitary(one, s)) < 1e-12, g.describe());
  }
}

TEST_CASE("scaled realization matches the independent scaled entangler") {
  const SpinSystem s = default_spin_system();
  const auto steps = realize(standard_plan().entangler);
  for (double z : {0.9, 0.97, 1.0, 1.04}) {
    const Operator u = realized_unitary(steps, s, z);
    CHECK((u - oracle::scaled_entangler(z)).norm() < 1e-12);
  }
  CHECK_THROWS_AS(realized_unitary(steps, s, 0.0), std::invalid_argument);
}

TEST_CASE("hydrogen pulses ignore the carbon scale") {
  const SpinSystem s = default_spin_system();
  const GateList h1{Gate::hadamard(1)};
  const auto steps = realize(h1);
  CHECK((realized_unitary(steps, s, 0.8) - realized_unitary(steps, s, 1.0)).norm() == 0.0);
}

TEST_CASE("compiled CNOT is exact when refocusing is exact") {
  const SpinSystem s = refocus_friendly();
  for (auto [c, t] : {std::pair{2, 3}, std::pair{3, 2}}) {
    const GateList g{Gate::cnot(c, t)};
    const PulseSequence seq = compile_to_pulses(g, s);
    CHECK(seq.duration() == doctest::Approx(cnot_coupling_delay(s, c, t)));
    CHECK(superop_distance(pulse_sequence_unitary(seq, s, 1.0), circuit_unitary(g, s)) < 1e-6);
  }
}

TEST_CASE("compiled CNOT on the default system") {
  // Residual comes from the carbon-carbon flip-flop term, which the
  // four-segment block only averages out to first order.
  const SpinSystem s = default_spin_system();
  const GateList g{Gate::cnot(2, 3)};
  const double d = superop_distance(pulse_sequence_unitary(compile_to_pulses(g, s), s, 1.0), circuit_unitary(g, s));
  CHECK(d == doctest::Approx(0.353668).epsilon(1e-4));

  SpinSystem hetero = refocus_friendly();
  hetero.frequencies_hz = default_spin_system().frequencies_hz;
  hetero.channels = {Channel::Hydrogen, Channel::Carbon, Channel::Hydrogen};
  CHECK(superop_distance(pulse_sequence_unitary(compile_to_pulses(g, hetero), hetero, 1.0), circuit_unitary(g, hetero)) <
        1e-9);
}

TEST_CASE("uncoupled CNOT cannot be compiled") {
  SpinSystem s = default_spin_system();
  s.couplings_hz(0, 2) = s.couplings_hz(2, 0) = 0.0;
  const GateList g{Gate::cnot(1, 3)};
  CHECK_THROWS_AS(compile_to_pulses(g, s), std::invalid_argument);
}

TEST_CASE("padded iteration lasts 8.5 ms and idles exactly") {
  const SpinSystem s = refocus_friendly();
  PulseParams p;
  p.iteration_duration_s = 0.0085;
  const PulseSequence seq = compile_entangler_iteration(standard_plan(), s, p);
  CHECK(seq.duration() == doctest::Approx(0.0085).epsilon(1e-12));
  CHECK(superop_distance(pulse_sequence_unitary(seq, s, 1.0), entangling_map(s)) < 1e-9);
  CHECK(seq.pulse_count(Channel::Hydrogen) > 0);

  const SpinSystem d = default_spin_system();
  const PulseSequence full = compile_entangler_iteration(standard_plan(), d, p);
  const PulseSequence bare = compile_to_pulses(standard_plan().entangler, d);
  // The idle block adds no error of its own on the default system.
  CHECK(superop_distance(pulse_sequence_unitary(full, d, 1.0), pulse_sequence_unitary(bare, d, 1.0)) < 1e-6);

  p.iteration_duration_s = 1e-3;
  CHECK_THROWS_AS(compile_entangler_iteration(standard_plan(), s, p), std::invalid_argument);
}

TEST_CASE("plan description lists every stage") {
  const std::string d = standard_plan().describe();
  CHECK(d.find("prep: H(1) CNOT(1->2) CNOT(2->3)") != std::string::npos);
  CHECK(d.find("entangler: H(2) CNOT(2->3)") != std::string::npos);
}
