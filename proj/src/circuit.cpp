#include "incoh/circuit.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace incoh {

namespace {

constexpr double kPi = std::numbers::pi;

void check_qubit(int q, std::size_t n_qubits) {
  if (q < 1 || static_cast<std::size_t>(q) > n_qubits)
    throw std::invalid_argument("qubit index " + std::to_string(q) + " out of range for " +
                                std::to_string(n_qubits) + " qubits");
}

std::string fmt_angle(double a) {
  std::ostringstream os;
  os << a / kPi << "*pi";
  return os.str();
}

}  // namespace

std::string Gate::describe() const {
  std::ostringstream os;
  switch (kind) {
    case GateKind::Hadamard: os << "H(" << qubit << ")"; break;
    case GateKind::Cnot: os << "CNOT(" << qubit << "->" << target << ")"; break;
    case GateKind::RotX: os << "RotX(" << qubit << ", " << fmt_angle(angle) << ")"; break;
    case GateKind::RotY: os << "RotY(" << qubit << ", " << fmt_angle(angle) << ")"; break;
    case GateKind::RotZ: os << "RotZ(" << qubit << ", " << fmt_angle(angle) << ")"; break;
    case GateKind::Delay: os << "Delay(" << duration << " s)"; break;
  }
  return os.str();
}

void Gate::validate(std::size_t n_qubits) const {
  switch (kind) {
    case GateKind::Delay:
      if (!(duration >= 0.0) || !std::isfinite(duration))
        throw std::invalid_argument("delay duration must be finite and >= 0");
      return;
    case GateKind::Cnot:
      check_qubit(qubit, n_qubits);
      check_qubit(target, n_qubits);
      if (qubit == target) throw std::invalid_argument("CNOT control and target must differ");
      return;
    case GateKind::RotX:
    case GateKind::RotY:
    case GateKind::RotZ:
      if (!std::isfinite(angle)) throw std::invalid_argument("rotation angle must be finite");
      [[fallthrough]];
    case GateKind::Hadamard:
      check_qubit(qubit, n_qubits);
      return;
  }
}

std::string CircuitPlan::describe() const {
  std::ostringstream os;
  auto dump = [&](const char* name, const GateList& gates) {
    os << name << ":";
    for (const Gate& g : gates) os << ' ' << g.describe();
    os << '\n';
  };
  dump("prep", prep);
  dump("entangler", entangler);
  dump("readout_even", readout_even);
  dump("readout_odd", readout_odd);
  os << "cycle_length: " << cycle_length << '\n';
  return os.str();
}

GateList ghz_prep() { return {Gate::hadamard(1), Gate::cnot(1, 2), Gate::cnot(2, 3)}; }

CircuitPlan standard_plan() {
  CircuitPlan plan;
  plan.prep = ghz_prep();
  plan.entangler = {Gate::hadamard(2), Gate::cnot(2, 3)};
  // G^4 = X on qubit 3, so the odd-parity state (|001> + |110>)/sqrt(2) is
  // disentangled by the same inverse-prep gates, landing on |001>.
  plan.readout_even = {Gate::cnot(2, 3), Gate::cnot(1, 2), Gate::hadamard(1)};
  plan.readout_odd = plan.readout_even;
  plan.cycle_length = 8;
  return plan;
}

GateList full_circuit(const CircuitPlan& plan, int n) {
  if (n < 0) throw std::invalid_argument("full_circuit: n must be non-negative");
  GateList gates = plan.prep;
  for (int i = 0; i < 4 * n; ++i) gates.insert(gates.end(), plan.entangler.begin(), plan.entangler.end());
  const GateList& readout = (n % 2 == 1) ? plan.readout_odd : plan.readout_even;
  gates.insert(gates.end(), readout.begin(), readout.end());
  return gates;
}

Operator gate_unitary(const Gate& g, const SpinSystem& sys) {
  g.validate(sys.n_qubits);
  const std::size_t n = sys.n_qubits;
  switch (g.kind) {
    case GateKind::Hadamard: {
      Operator h = (pauli_matrix(Pauli::Z) + pauli_matrix(Pauli::X)) / std::sqrt(2.0);
      return embed(h, g.qubit, n);
    }
    case GateKind::Cnot: {
      const Operator z = pauli_matrix(Pauli::Z);
      const Operator id = Operator::Identity(2, 2);
      const Operator p0 = embed((id + z) / 2.0, g.qubit, n);
      const Operator p1 = embed((id - z) / 2.0, g.qubit, n);
      return p0 + p1 * embed(pauli_matrix(Pauli::X), g.target, n);
    }
    case GateKind::RotX: return embed(rotation(Pauli::X, g.angle), g.qubit, n);
    case GateKind::RotY: return embed(rotation(Pauli::Y, g.angle), g.qubit, n);
    case GateKind::RotZ: return embed(rotation(Pauli::Z, g.angle), g.qubit, n);
    case GateKind::Delay: return propagator(internal_hamiltonian(sys), g.duration);
  }
  throw std::logic_error("unreachable gate kind");
}

Operator circuit_unitary(std::span<const Gate> gates, const SpinSystem& sys) {
  const auto dim = static_cast<Eigen::Index>(sys.dim());
  Operator u = Operator::Identity(dim, dim);
  for (const Gate& g : gates) u = gate_unitary(g, sys) * u;
  return u;
}

Operator entangling_map(const SpinSystem& sys) {
  if (sys.n_qubits != 3) throw std::invalid_argument("entangling_map: requires a 3-qubit system");
  const GateList gates = standard_plan().entangler;
  return circuit_unitary(gates, sys);
}

// ---------------------------------------------------------------------------

namespace {

void append_hadamard(std::vector<Step>& out, int q) {
  out.push_back(PulseStep{q, Pauli::Y, kPi / 4});
  out.push_back(PulseStep{q, Pauli::X, kPi});
  out.push_back(PulseStep{q, Pauli::Y, -kPi / 4});
}

void append_rot_z(std::vector<Step>& out, int q, double angle) {
  out.push_back(PulseStep{q, Pauli::X, -kPi / 2});
  out.push_back(PulseStep{q, Pauli::Y, angle});
  out.push_back(PulseStep{q, Pauli::X, kPi / 2});
}

}  // namespace

std::vector<Step> realize(const Gate& g) {
  std::vector<Step> out;
  switch (g.kind) {
    case GateKind::Hadamard: append_hadamard(out, g.qubit); break;
    case GateKind::Cnot:
      append_hadamard(out, g.target);
      out.push_back(CouplingStep{g.qubit, g.target, kPi / 2});
      append_rot_z(out, g.qubit, -kPi / 2);
      append_rot_z(out, g.target, -kPi / 2);
      append_hadamard(out, g.target);
      break;
    case GateKind::RotX: out.push_back(PulseStep{g.qubit, Pauli::X, g.angle}); break;
    case GateKind::RotY: out.push_back(PulseStep{g.qubit, Pauli::Y, g.angle}); break;
    case GateKind::RotZ: append_rot_z(out, g.qubit, g.angle); break;
    case GateKind::Delay: out.push_back(FreeStep{g.duration}); break;
  }
  return out;
}

std::vector<Step> realize(std::span<const Gate> gates) {
  std::vector<Step> out;
  for (const Gate& g : gates) {
    auto steps = realize(g);
    out.insert(out.end(), steps.begin(), steps.end());
  }
  return out;
}

Operator realized_unitary(std::span<const Step> steps, const SpinSystem& sys, double carbon_scale) {
  if (!(carbon_scale > 0.0)) throw std::invalid_argument("rf scale factor must be positive");
  const std::size_t n = sys.n_qubits;
  const auto dim = static_cast<Eigen::Index>(sys.dim());
  Operator u = Operator::Identity(dim, dim);
  Operator h_int;  // built on first free step
  for (const Step& step : steps) {
    Operator factor;
    if (const auto* p = std::get_if<PulseStep>(&step)) {
      const double scale = sys.channel(p->qubit) == Channel::Carbon ? carbon_scale : 1.0;
      factor = embed(rotation(p->axis, p->angle * scale), p->qubit, n);
    } else if (const auto* c = std::get_if<CouplingStep>(&step)) {
      const Operator zz = pauli_product(PauliLabel::z_on(n, {c->a, c->b}));
      const Complex i{0.0, 1.0};
      factor = std::cos(c->angle / 2) * Operator::Identity(dim, dim) - i * std::sin(c->angle / 2) * zz;
    } else {
      const auto& f = std::get<FreeStep>(step);
      if (h_int.size() == 0) h_int = internal_hamiltonian(sys);
      factor = propagator(h_int, f.duration);
    }
    u = factor * u;
  }
  return u;
}

// ---------------------------------------------------------------------------

double PulseSequence::duration() const {
  double total = 0.0;
  for (const Segment& s : segments)
    if (const auto* d = std::get_if<DelaySegment>(&s)) total += d->duration;
  return total;
}

std::size_t PulseSequence::pulse_count(Channel channel) const {
  std::size_t count = 0;
  for (const Segment& s : segments)
    if (const auto* p = std::get_if<Pulse>(&s); p != nullptr && p->channel == channel) ++count;
  return count;
}

void PulseSequence::append(const PulseSequence& other) {
  segments.insert(segments.end(), other.segments.begin(), other.segments.end());
}

double cnot_coupling_delay(const SpinSystem& sys, int control, int target) {
  check_qubit(control, sys.n_qubits);
  check_qubit(target, sys.n_qubits);
  const double j = sys.couplings_hz(control - 1, target - 1);
  if (j == 0.0)
    throw std::invalid_argument("no scalar coupling between qubits " + std::to_string(control) +
                                " and " + std::to_string(target) + "; CNOT cannot be compiled");
  return 1.0 / (2.0 * std::abs(j));
}

namespace {

constexpr double kPhaseX = 0.0;
constexpr double kPhaseY = kPi / 2;

class SequenceBuilder {
public:
  explicit SequenceBuilder(const SpinSystem& sys) : sys_(sys) {}

  // One pi pulse per channel on the listed qubits.
  void pi_pulse(std::vector<int> qubits, double phase) {
    std::vector<int> hydrogen;
    std::vector<int> carbon;
    for (int q : qubits) (sys_.channel(q) == Channel::Hydrogen ? hydrogen : carbon).push_back(q);
    if (!hydrogen.empty()) seq_.segments.push_back(Pulse{Channel::Hydrogen, hydrogen, kPi, phase});
    if (!carbon.empty()) seq_.segments.push_back(Pulse{Channel::Carbon, carbon, kPi, phase});
  }

  void pulse(int q, Pauli axis, double angle) {
    seq_.segments.push_back(Pulse{sys_.channel(q), {q}, angle, axis == Pauli::X ? kPhaseX : kPhaseY});
  }

  void delay(double t) {
    if (t > 0.0) seq_.segments.push_back(DelaySegment{t});
  }

  std::vector<int> spectators(int a, int b) const {
    std::vector<int> out;
    for (int q = 1; q <= static_cast<int>(sys_.n_qubits); ++q)
      if (q != a && q != b) out.push_back(q);
    return out;
  }

  // Toggling frames I, Z_t X_s, X_c Y_t, X_c X_t X_s: keeps Z_c Z_t and
  // removes offsets, flip-flop terms and secular couplings to spectators.
  void coupling_block(int c, int t, double total) {
    const auto s = spectators(c, t);
    const double tau = total / 4;
    delay(tau);
    pi_pulse({t}, kPhaseX);
    pi_pulse({t}, kPhaseY);
    pi_pulse(s, kPhaseX);
    delay(tau);
    pi_pulse({c, t}, kPhaseX);
    pi_pulse(s, kPhaseX);
    delay(tau);
    pi_pulse({t}, kPhaseX);
    pi_pulse({t}, kPhaseY);
    pi_pulse(s, kPhaseX);
    delay(tau);
    pi_pulse({c, t}, kPhaseX);
    pi_pulse(s, kPhaseX);
  }

  // Toggling frames I, Y_b X_s, X_a X_s, X_a Y_b: every bilinear and Zeeman
  // term averages to zero.
  void idle_block(int a, int b, double total) {
    const auto s = spectators(a, b);
    const double tau = total / 4;
    delay(tau);
    pi_pulse({b}, kPhaseY);
    pi_pulse(s, kPhaseX);
    delay(tau);
    pi_pulse({b}, kPhaseY);
    pi_pulse({a}, kPhaseX);
    delay(tau);
    pi_pulse({b}, kPhaseY);
    pi_pulse(s, kPhaseX);
    delay(tau);
    pi_pulse({a}, kPhaseX);
    pi_pulse({b}, kPhaseY);
  }

  PulseSequence take() { return std::move(seq_); }

private:
  const SpinSystem& sys_;
  PulseSequence seq_;
};

}  // namespace

PulseSequence compile_to_pulses(std::span<const Gate> gates, const SpinSystem& sys,
                                const PulseParams& params) {
  sys.validate();
  if (params.refocus_cycles < 1) throw std::invalid_argument("refocus_cycles must be >= 1");
  SequenceBuilder builder(sys);
  for (const Gate& g : gates) {
    g.validate(sys.n_qubits);
    for (const Step& step : realize(g)) {
      if (const auto* p = std::get_if<PulseStep>(&step)) {
        builder.pulse(p->qubit, p->axis, p->angle);
      } else if (const auto* c = std::get_if<CouplingStep>(&step)) {
        // exp(-i pi J T/2 ZZ) = exp(-i angle/2 ZZ)  =>  T = angle / (pi J)
        const double j = sys.couplings_hz(c->a - 1, c->b - 1);
        if (j == 0.0) (void)cnot_coupling_delay(sys, c->a, c->b);  // throws
        double total = c->angle / (kPi * j);
        if (total < 0.0)
          throw std::invalid_argument("compile_to_pulses: negative coupling evolution requires J of the opposite sign");
        for (int k = 0; k < params.refocus_cycles; ++k)
          builder.coupling_block(c->a, c->b, total / params.refocus_cycles);
      } else {
        builder.delay(std::get<FreeStep>(step).duration);
      }
    }
  }
  return builder.take();
}

PulseSequence compile_entangler_iteration(const CircuitPlan& plan, const SpinSystem& sys,
                                          const PulseParams& params) {
  PulseSequence seq = compile_to_pulses(plan.entangler, sys, params);
  const double pad = params.iteration_duration_s - seq.duration();
  if (params.iteration_duration_s > 0.0 && pad < -1e-12)
    throw std::invalid_argument("iteration duration " + std::to_string(params.iteration_duration_s) +
                                " s is shorter than the compiled entangler (" +
                                std::to_string(seq.duration()) + " s)");
  if (params.iteration_duration_s > 0.0 && pad > 1e-12) {
    SequenceBuilder builder(sys);
    // Idle on the entangler's pair; the plan's entangler acts on qubits 2 and 3.
    for (int k = 0; k < params.refocus_cycles; ++k) builder.idle_block(2, 3, pad / params.refocus_cycles);
    seq.append(builder.take());
  }
  return seq;
}

Operator pulse_sequence_unitary(const PulseSequence& seq, const SpinSystem& sys, double carbon_scale) {
  if (!(carbon_scale > 0.0)) throw std::invalid_argument("rf scale factor must be positive");
  const std::size_t n = sys.n_qubits;
  const auto dim = static_cast<Eigen::Index>(sys.dim());
  const Operator h = rotating_frame_hamiltonian(sys);
  const Complex i{0.0, 1.0};
  Operator u = Operator::Identity(dim, dim);
  for (const Segment& seg : seq.segments) {
    if (const auto* p = std::get_if<Pulse>(&seg)) {
      const double angle = p->angle * (p->channel == Channel::Carbon ? carbon_scale : 1.0);
      const Operator axis = std::cos(p->phase) * pauli_matrix(Pauli::X) + std::sin(p->phase) * pauli_matrix(Pauli::Y);
      const Operator r = std::cos(angle / 2) * Operator::Identity(2, 2) - i * std::sin(angle / 2) * axis;
      for (int q : p->targets) u = embed(r, q, n) * u;
    } else {
      u = propagator(h, std::get<DelaySegment>(seg).duration) * u;
    }
  }
  return u;
}

double superop_distance(const Operator& a, const Operator& b) {
  const CMatrix sa = Eigen::kroneckerProduct(a.conjugate(), a);
  const CMatrix sb = Eigen::kroneckerProduct(b.conjugate(), b);
  return (sa - sb).norm();
}

}  // namespace incoh
